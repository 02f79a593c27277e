"""poring-lab: exact-arithmetic laboratory for partial orderings, real
spectra, Baer hulls, total quotient rings and real-closure descriptors of
glued orders inside finite products of real number fields."""

__version__ = "0.1.0"
