# API package marker
