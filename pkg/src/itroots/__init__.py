"""itroots: iterative-root certificates, search and constructions.

Submodules:
    endo          finite endofunctions (tables, fibers, decomposition)
    root_solver   exhaustive search for g with g^n = f on finite domains
    certifier     cardinality certificates of non-existence (cases C1/C2/C3)
    pl_interval   exact piecewise-affine self-maps of [0,1]
    circle        exact piecewise-affine circle maps and chordal metric
    exactreal     adaptive-precision comparable reals (chord lengths)
    constructor   density constructions: root-free maps near a given map
    symbolic      ray-indexed domains and measured block systems
    cli           command-line interface
"""

__version__ = "0.1.0"
