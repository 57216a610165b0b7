"""Exception types shared across the package."""


class QuadmapsError(Exception):
    """Base class for all package-specific errors."""


class MalformedPermutation(QuadmapsError):
    """twin/next_at_vertex arrays are not valid permutations, or twin has a fixed point."""


class Disconnected(QuadmapsError):
    """The half-edge structure does not describe a connected map."""


class NonPlanar(QuadmapsError):
    """Euler characteristic differs from 2."""


class InvalidPerimeter(QuadmapsError):
    """Perimeter must be a positive even integer."""


class BijectionInternal(QuadmapsError):
    """Arc insertion produced an invalid embedding; indicates a bug, never bad input."""


class CoreUndefined(QuadmapsError):
    """Operation requires a core but the core is the cemetery point."""


class PreconditionViolated(QuadmapsError):
    """Restriction called outside its stated preconditions (distinct from the cemetery value)."""


class PerimeterMismatch(QuadmapsError):
    """Filler perimeter incompatible with the restriction's glued boundary part."""


class CemeteryInput(QuadmapsError):
    """Operation does not accept the cemetery value."""


class MissingBackReferences(QuadmapsError):
    """Encoding-side data requested for a map that was not built by the bijection."""


class NotACorrespondence(QuadmapsError):
    """Pair set does not cover both vertex sets."""


class NonIntegralProduct(QuadmapsError):
    """The exact counting product failed its integrality assertion."""


class ZeroDenominator(QuadmapsError):
    """Ratio requested where the reference probability vanishes."""


class UniverseTooLarge(QuadmapsError):
    """Brute-force enumeration would exceed the configured universe bound."""


class UnknownCode(QuadmapsError):
    """Sample code not present in the reference universe."""


class EmptySample(QuadmapsError):
    """Statistic requested on an empty sample."""


class ConfigError(QuadmapsError):
    """Invalid CLI configuration."""
