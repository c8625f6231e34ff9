"""Exception types raised across the package."""


class SpinBosonError(ValueError):
    """Base class for invalid inputs."""


class InvalidSpec(SpinBosonError):
    pass


class InvalidArgument(SpinBosonError):
    pass


class InvalidState(SpinBosonError):
    pass


class InvalidGate(SpinBosonError):
    pass


class InvalidInput(SpinBosonError):
    pass


class InvalidCutoff(SpinBosonError):
    pass


class ResourceLimit(RuntimeError):
    """A requested computation exceeds a configured size ceiling."""
