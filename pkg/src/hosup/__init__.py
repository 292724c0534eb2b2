"""hosup: a desk-scale higher-order superposition prover built on
depth-bounded unification, with a strategy-schedule builder."""

__version__ = "0.1.0"
