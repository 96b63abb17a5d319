"""Quality tooling for machine-translated weather products."""

__version__ = "0.1.0"
