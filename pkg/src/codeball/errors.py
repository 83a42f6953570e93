"""Exception types shared across the package."""


class CodeballError(Exception):
    """Base class for all errors raised by this package."""


class BadDimensions(CodeballError, ValueError):
    """Code dimensions violate 1 <= k < n (or a similar constraint)."""


class DependentRows(CodeballError, ValueError):
    """Generator rows are linearly dependent over GF(2)."""


class NotSystematic(CodeballError, ValueError):
    """Operation requires a matrix in systematic form."""


class FullDimensionCode(CodeballError, ValueError):
    """k = n leaves an empty dual; the requested object does not exist."""


class LengthMismatch(CodeballError, ValueError):
    """Vector or histogram lengths are incompatible."""


class DomainError(CodeballError, ValueError):
    """Argument outside the mathematical domain of the function."""


class TooLarge(CodeballError, ValueError):
    """Problem size exceeds the exhaustive-enumeration budget."""


class NoSolution(CodeballError, ValueError):
    """No weight satisfies the barrier equation at this threshold."""


class InitFailure(CodeballError, RuntimeError):
    """Could not draw a starting state with nonzero target weight."""


class NoSamples(CodeballError, ValueError):
    """The run configuration records zero post-burn-in samples."""


class EmptySamples(CodeballError, ValueError):
    """An estimator was handed an empty sample list."""


class ZeroOverlap(CodeballError, ValueError):
    """Overlap is zero; the shot-count model diverges."""


class TrialsExhausted(CodeballError, RuntimeError):
    """Randomized decoding gave up before finding a codeword."""


class Stalled(CodeballError, RuntimeError):
    """Greedy descent stopped away from a codeword (estimator noise)."""


class VerificationFailure(CodeballError, RuntimeError):
    """A self-check property failed; the message names the property."""
