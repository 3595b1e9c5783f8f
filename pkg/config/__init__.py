"""Config package for the risk_measures project."""
