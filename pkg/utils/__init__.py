"""Support modules: logging setup, test assertions, factories and brute-force oracles."""
