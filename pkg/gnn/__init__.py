"""
Graph filter banks, median activations, softmax readout and the layered model built from them.
"""
