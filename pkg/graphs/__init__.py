"""
Graph representation, shift operators and hop neighborhoods consumed by the median activations.
"""
