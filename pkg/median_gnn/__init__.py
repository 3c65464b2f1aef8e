"""
Project package for the median activation graph neural network engine.

The engine is a regular Django project: the numerical work lives in the `graphs`, `gnn`,
`training` and `datagen` apps, and the experiment runner with its management commands lives in
the `experiments` app.
"""
