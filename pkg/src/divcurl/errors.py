"""Exception types raised by divcurl."""


class DivCurlError(ValueError):
    """Base class for all library errors."""


class GridSizeError(DivCurlError):
    """Grid dimension or resolution outside the supported range."""


class GridMismatchError(DivCurlError):
    """Operands live on different grids."""


class ComponentMismatchError(DivCurlError):
    """Field has the wrong number of components for the operation."""


class SingularSymbolError(DivCurlError):
    """Symbol evaluates to a non-finite value on the frequency lattice."""


class SizeLimitError(DivCurlError):
    """Direct-summation operation would exceed its size cap."""


class DomainError(DivCurlError):
    """Point or atom lies outside the fundamental domain [0, 2pi)^d."""


class ResolutionError(DivCurlError):
    """Requested oscillation or mollification is not resolved by the grid."""


class SymbolOrderError(DivCurlError):
    """Symbol order is not admissible for the requested check."""
