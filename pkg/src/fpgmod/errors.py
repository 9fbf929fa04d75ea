"""Exception hierarchy.

Every error carries a short machine-friendly ``code`` so the CLI can emit a
distinct diagnostic per failure kind.
"""


class FpgError(ValueError):
    code = "error"


class NotPrime(FpgError):
    code = "not-prime"


class ParseError(FpgError):
    code = "parse-error"


class ShapeMismatch(FpgError):
    code = "shape-mismatch"


class NotSquare(FpgError):
    code = "not-square"


class AmbientMismatch(FpgError):
    code = "ambient-mismatch"


class NotContained(FpgError):
    code = "not-contained"


class DimensionMismatch(FpgError):
    code = "dimension-mismatch"


class CharacteristicMismatch(FpgError):
    code = "characteristic-mismatch"


class NotUnipotent(FpgError):
    code = "not-unipotent"


class BlockTooLarge(FpgError):
    code = "block-too-large"


class LevelOutOfRange(FpgError):
    code = "level-out-of-range"


class LengthOutOfRange(FpgError):
    code = "length-out-of-range"


class NotInvariant(FpgError):
    code = "not-invariant"


class GroupMismatch(FpgError):
    code = "group-mismatch"


class JOutOfRange(FpgError):
    code = "j-out-of-range"


class NotNested(FpgError):
    code = "not-nested"


class ModelInvalid(FpgError):
    code = "model-invalid"


class FixedSpaceTooLarge(FpgError):
    code = "fixed-space-too-large"


class InternalCheckFailed(AssertionError):
    """A guaranteed identity did not hold; this is a bug, not bad input."""

    code = "internal-check-failed"
