"""Exact arithmetic for well-rounded sublattices of the hexagonal lattice.

The subpackages split along the natural seams: conic parameterizations,
Eisenstein triple machinery, concrete sublattice geometry, index counting,
and the zeta-based quality measures.  Everything upstream of the zeta
values runs on exact integers and fractions.
"""

__version__ = "0.1.0"
