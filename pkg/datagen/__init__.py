"""
Datasets for the engine: synthetic diffusion processes on graphs, word adjacency networks and
function-word features from text corpora, dataset files and seeded stratified splits.
"""
