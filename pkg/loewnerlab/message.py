from typing import Optional


class LoewnerError(Exception):
    """Base exception for loewnerlab errors."""

    pass


class FormattedLoewnerError(LoewnerError):
    """Base class for loewnerlab errors with specific formatting."""

    error_header = "[ **** Loewnerlab Error **** ]"
    details = ""

    def __init__(self, message: str):
        self.original_message = message
        super().__init__(message)

    def formatted_message(self) -> str:
        if not self.details:
            return f"Error: {self.original_message}"
        return f"{self.error_header}\n\n{self.details}\n\nOriginal error: {self.original_message}"

    def __str__(self) -> str:
        return self.formatted_message()


class DomainError(FormattedLoewnerError):
    """Raised when a parameter lies outside the domain of an operation."""

    details = """A parameter is outside the domain of the requested operation.
Check the preconditions of the function you called."""

    def __init__(self, message: str = "Parameter out of domain"):
        super().__init__(message=message)


class BranchError(FormattedLoewnerError):
    """Raised when a slit map is evaluated where it has no single-valued image."""

    details = """The point lies on a slit or the image left the closed upper half-plane.
Use the side-tagged map for points on a slit, or refine the discretization."""

    def __init__(self, message: str = "Branch failure"):
        super().__init__(message=message)


class NonFiniteError(FormattedLoewnerError):
    """Raised when an integration produces non-finite values."""

    details = """The integration produced a non-finite value.
The driving function or the initial point is probably invalid."""

    def __init__(self, message: str = "Non-finite intermediate value"):
        super().__init__(message=message)


class StepUnderflowError(FormattedLoewnerError):
    """Raised when the adaptive step size underflows without a capture event."""

    details = """The adaptive integrator could not make progress.
This is not a capture: loosen the tolerance or sample the driver more finely."""

    def __init__(self, message: str = "Step size underflow"):
        super().__init__(message=message)


class RefinementError(FormattedLoewnerError):
    """Raised when adjacent trace vertices separate by more than the policy allows."""

    details = """Adjacent trace vertices are further apart than the refinement policy allows.
Increase the number of steps or add a singular time to the refinement policy."""

    def __init__(self, message: str = "Trace refinement insufficient"):
        super().__init__(message=message)


class ExtractionError(FormattedLoewnerError):
    """Raised when driving-term extraction meets a vertex it cannot absorb."""

    details = """The curve could not be unzipped at the reported arc.
The curve touches the real line again, is not simple, or delta is too coarse."""

    def __init__(self, message: str = "Extraction failed", arc_index: Optional[int] = None):
        self.arc_index = arc_index
        if arc_index is not None:
            message = f"{message} (arc {arc_index})"
        super().__init__(message=message)


class JunctionError(FormattedLoewnerError):
    """Raised when two driving functions do not meet continuously."""

    def __init__(self, message: str = "Discontinuous junction"):
        super().__init__(message=message)


class LevelCapError(FormattedLoewnerError):
    """Raised when a fractal level would exceed the configured vertex cap."""

    details = """The requested refinement level produces more vertices than allowed.
Lower the level or raise max_vertices in LabUserConfig."""

    def __init__(self, message: str = "Level over cap"):
        super().__init__(message=message)


class ParseError(FormattedLoewnerError):
    """Raised for malformed driver, curve or point files."""

    def __init__(
        self,
        message: str = "Malformed input",
        line: Optional[int] = None,
        field: Optional[str] = None,
    ):
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field {field!r}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message=message)


class PreconditionError(FormattedLoewnerError):
    """Raised when a verification routine is called outside its hypotheses."""

    details = """The hypotheses of the requested check do not hold for this input."""

    def __init__(self, message: str = "Precondition violated"):
        super().__init__(message=message)


class VisitationError(FormattedLoewnerError):
    """Raised when the dense builder cannot bring the trace within tolerance of a point."""

    details = """A target point is not within tolerance of the generated trace.
Increase the resolution of the base family or loosen the tolerance."""

    def __init__(self, message: str = "Point not visited", point_index: Optional[int] = None):
        self.point_index = point_index
        if point_index is not None:
            message = f"{message} (point {point_index})"
        super().__init__(message=message)


class AlreadyInitializedError(FormattedLoewnerError):
    """Raised when loewnerlab is already initialized."""

    details = """loewnerlab is already initialized.
Call shutdown_lab() before initializing again."""

    def __init__(self, message: str = "loewnerlab already initialized"):
        super().__init__(message=message)
