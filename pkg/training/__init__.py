"""
ADAM optimizer, the epoch/batch training loop, evaluation metrics and training reports.
"""
