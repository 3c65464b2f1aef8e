"""
Experiment runner: configuration, multi-round comparisons, result exports and the management
commands that drive the engine.
"""
