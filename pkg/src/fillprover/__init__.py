"""Decision procedure, proof checkers, and proof translations for FILL and BiILL.

FILL is full intuitionistic multiplicative linear logic: tensor, par, their
units, and linear implication.  BiILL extends it with exclusion, the
co-residual of par.  The package decides provability through proof search in
a nested sequent calculus, checks proofs in that calculus as well as in a
shallow structural calculus and a display calculus, and translates proofs
between the three.
"""

__version__ = "0.1.0"
