"""Polycyclic group presentations, collection, conjugacy search and key exchange."""

from pcgroup.collection import (
    CollectionLimitError, ConsistencyReport, check_consistency, collect, commutator,
    conjugate, inverse, multiply, power,
)
from pcgroup.presentation import (
    PcPresentation, PresentationError, embed, format_presentation, hirsch_length,
    parse_presentation, random_word,
)
from pcgroup.zoo import (
    GroupSpec, cyclotomic_group, dihedral, direct_product, heisenberg, matrix_of_word,
)

__version__ = "0.1.0"
