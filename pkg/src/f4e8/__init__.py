"""Verifiable construction of the maximal F4 subgroup of E8 in characteristic 3.

The package builds the Chevalley Lie algebra e8 over GF(3)/GF(9), instantiates
an explicit f4 subalgebra and its F4 root subgroups from bundled embedding
data, and mechanically checks the structural claims: closure, Chevalley
relations up to a sign character, self-normalization, the 52+196 module
decomposition, unipotent/nilpotent class fusion invariants, and the
hill-climb conjugation of a toral basis into the standard Cartan.
"""

__version__ = "1.0.0"
