"""Decision procedures for equations over periodic lattice-ordered pregroups.

The concrete algebras are monoids of order-preserving maps: n-periodic
residuated self-maps of the integers (fnz), piecewise-linear lexicographic
maps on Q x Z (lexfn), and a wreath-style recombination of the two (wreath).
The decision procedures (decide) reduce equation failure to finite
combinatorial certificates (search, diagram) whose realizability over the
integers is settled by bounded spacing arguments (spacing).
"""

__version__ = "0.1.0"
