"""Exception types shared across the package."""


class NilmasseyError(Exception):
    """Base class for all library errors."""


class ContextMismatch(NilmasseyError):
    """Operands live over different moduli, variable counts or degree bounds."""


class NonUnit(NilmasseyError):
    """Inversion attempted on a residue divisible by ell."""


class PrecisionViolation(NilmasseyError):
    """A factorial that must be inverted is divisible by ell."""


class NotGroupLike(NilmasseyError):
    """Series with constant term != 1, or outside the image of the free
    nilpotent group."""


class BadGenerator(NilmasseyError):
    """Generator index outside 1..r."""


class NotLie(NilmasseyError):
    """Homogeneous slice outside the span of the basic-commutator expansions."""


class NotACocycle(NilmasseyError):
    """2-cochain with nonzero coboundary fed to a decision procedure."""


class NotTwistedCocycle(NilmasseyError):
    """Map G -> nilpotent group violating s(gh) = s(g) * g(s(h))."""


class LieSliceViolation(NilmasseyError):
    """Internal consistency failure: a boundary value left the expected
    homogeneous Lie slice."""


class SectionInvalid(NilmasseyError):
    """Set-theoretic section that does not split the quotient map."""


class InvalidDefiningSystem(NilmasseyError):
    """Cochain family violating the defining-system identities."""


class UnsupportedJ(NilmasseyError):
    """Monomial index outside the family the requested action supports."""


class BadPoint(NilmasseyError):
    """Point descriptor at 0, 1 or with a zero tangent scale."""


class DegenerateConfiguration(NilmasseyError):
    """Coinciding branch points or vanishing tangent scales."""


class ConfigError(NilmasseyError):
    """Malformed run configuration."""
