# ---------------------------------------------------------------------------
# File    : config.py
# Purpose : Environment-driven defaults for precision, step and brute-force budgets
# License : MIT
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------
import os

# Arc precision N used when a scenario does not declare one
DEFAULT_PRECISION = int(os.getenv("ARCPERSIST_PRECISION", "12"))

# Directed blow-up oracle
DEFAULT_MAX_STEPS = int(os.getenv("ARCPERSIST_MAX_STEPS", "64"))
PRECISION_FLOOR = int(os.getenv("ARCPERSIST_PRECISION_FLOOR", "4"))

# Brute-force budgets (F_p grids, fiber factorization, reparametrization)
GRID_BUDGET = int(os.getenv("ARCPERSIST_GRID_BUDGET", "200000"))
MAX_GRID_DIM = int(os.getenv("ARCPERSIST_MAX_GRID_DIM", "4"))
FACTOR_BUDGET = int(os.getenv("ARCPERSIST_FACTOR_BUDGET", "20000"))
MAX_FACTOR_PRIME = int(os.getenv("ARCPERSIST_MAX_FACTOR_PRIME", "7"))
PRECISION_BUDGET = int(os.getenv("ARCPERSIST_PRECISION_BUDGET", "4096"))

LOG_LEVEL = os.getenv("ARCPERSIST_LOG_LEVEL", "WARNING")
