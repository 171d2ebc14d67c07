"""Exception types shared across the package."""


class FermatprodError(Exception):
    """Base class for every package-specific error."""


class NotSplittingError(FermatprodError):
    """x^(2^n) = -1 has no solution modulo p (p is not 1 mod 2^(n+1))."""


class NotARootError(FermatprodError):
    """The supplied residue is not a root of x^(2^n) + 1 modulo p."""


class InfeasibleSizeError(FermatprodError):
    """The requested computation exceeds the supported desk-scale cap."""


class LevelMismatchError(FermatprodError):
    """Cyclotomic operands live in different ambient fields."""


class TooFewRootsError(FermatprodError):
    """Fewer residues than the pigeonhole argument requires."""


class HypothesisUnmetError(FermatprodError):
    """The congruence system's exponents do not sum to the forcing total."""


class InvalidSystemError(FermatprodError):
    """A congruence system violates its structural or divisibility invariants."""


class CertificateError(FermatprodError):
    """A bound certificate failed to verify; signals an implementation bug."""


class AnchorNotPrimeError(FermatprodError):
    """a^(2^n) + 1 is composite, so a cannot anchor a chain link."""


class AnchorParityError(FermatprodError):
    """Chain anchors must be even (odd a makes a^(2^n)+1 even and composite)."""


class ChainBreakError(FermatprodError):
    """A chain link failed verification or the chain leaves a gap."""


class BeyondSieveError(FermatprodError):
    """The query point lies beyond the sieved range."""
