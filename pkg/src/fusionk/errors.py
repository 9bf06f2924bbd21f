class FusionKError(Exception):
    pass


class SpectralError(FusionKError):
    """Eigen-decomposition did not produce the expected structure."""


class ToleranceError(FusionKError):
    """A float that should be an integer (or a non-negative one) is not."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class TableFormatError(FusionKError):
    """Malformed serialized fusion table."""

    def __init__(self, message: str, position=None):
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)
        self.position = position
