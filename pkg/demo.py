# ---------------------------------------------------------------------------
# File    : demo.py
# Purpose : Minimal walk-through on the cusp x^2 - y^3: persistence by the
#           closed formula, by directed blow-ups and by Nash multiplicities.
# License : MIT
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------
from src.algebra import QQ, parse_polynomial
from src.arcs import Arc, persistence_invariants, persistence_sweep
from src.hickel import nash_sequence_hypersurface, oracle_trace
from src.rees import hypersurface_algebra


F = parse_polynomial("x^2 - y^3", QQ, ("x", "y"))
G = hypersurface_algebra(F, (0, 0))          # Diff(<(F, 2)>)
phi = Arc.from_coefficients(QQ, ("x", "y"), {"x": [0, 0, 0, 1], "y": [0, 0, 1]}, 16)

print("G =", G)
report = persistence_invariants(phi, G, (0, 0))
print({k: str(v) for k, v in report.to_dict().items() if v is not None})

value, trace = oracle_trace(phi, G, (0, 0))
print("blow-ups until the center leaves Sing:", value)
for record in trace:
    print(f"  step {record.step}: chart {record.chart or '-'}, center {record.center}, "
          f"orders {list(record.orders)}")

print("Nash sequence:", list(nash_sequence_hypersurface(phi, F, (0, 0))))

for row in persistence_sweep(phi, G, (0, 0), range(1, 5)):
    print(f"  n={row.n}: rho(phi_n)/n = {row.ratio}  (r = {report.r})")
