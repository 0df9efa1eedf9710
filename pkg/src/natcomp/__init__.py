"""Component-based library of nature-inspired metaheuristics for box-bounded minimisation."""
__version__ = "0.1.0"
