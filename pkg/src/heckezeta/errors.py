"""Exception types shared across the package."""


class HeckeZetaError(Exception):
    """Base class for all package errors."""


class NotFuchsian(HeckeZetaError):
    """lambda < 2 but not of the form 2*cos(pi/q)."""


class DegenerateMatrix(HeckeZetaError):
    """Matrix with (numerically) vanishing determinant."""


class NotHyperbolic(HeckeZetaError):
    """Norm requested for a non-hyperbolic element."""


class BranchViolation(HeckeZetaError):
    """Evaluation point left the certified zero-free region of c*z + d."""


class NotUnitary(HeckeZetaError):
    """Generator image is not unitary within tolerance."""


class RelationViolated(HeckeZetaError):
    """Generator images violate a defining relation of the group."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class GroupMismatch(HeckeZetaError):
    """Operands belong to different Hecke groups."""


class PoleAt1(HeckeZetaError):
    """Hurwitz-type Lerch zeta evaluated at its pole s = 1."""


class NotAPole(HeckeZetaError):
    """Residue requested where the function is regular."""


class DomainError(HeckeZetaError):
    """Argument outside the allowed domain (e.g. Re w <= 0)."""


class BudgetExceeded(HeckeZetaError):
    """Word/class enumeration exceeded its node budget."""


class DiscSearchFailed(HeckeZetaError):
    """No admissible disc system found; carries the worst violation."""


class ContractionViolated(HeckeZetaError):
    """A fast-operator term fails to map its domain strictly inside."""


class PoleHit(HeckeZetaError):
    """Evaluation too close to the pole lattice (1 - N_0)/2."""


class SpectralRadiusExceeded(HeckeZetaError):
    """log-det trace series requested with spectral radius >= 1."""


class UnresolvedBox(HeckeZetaError):
    """Winding count failed to stabilize under grid refinement."""


class QNotDefined(HeckeZetaError):
    """Billiard construction needs chi(Q) but the rep does not define it."""


class QEvenUnsupported(HeckeZetaError):
    """Billiard systems for even q are out of scope."""


class OutOfRegion(HeckeZetaError):
    """Euler product requested outside its convergence region."""
