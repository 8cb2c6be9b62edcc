"""Optimal linear unbiased estimators for experiments on networks."""
