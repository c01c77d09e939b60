"""Exception hierarchy for mlcm.

Every error raised deliberately by the package derives from :class:`MLCMError`
so callers (and the CLI) can catch one type. Input problems also derive from
``ValueError`` to stay compatible with scikit-learn conventions.
"""


class MLCMError(Exception):
    """Base class for all package errors."""

    code = "mlcm_error"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class ValidationError(MLCMError, ValueError):
    code = "validation_error"


class DimensionMismatchError(ValidationError):
    """A base model's matrix (or the truth) does not match the reference shape."""

    code = "dimension_mismatch"

    def __init__(self, model, expected, got):
        self.model = model
        self.expected = tuple(expected)
        self.got = tuple(got)
        where = "truth" if model is None else f"model {model}"
        super().__init__(f"{where}: expected shape {self.expected}, got {self.got}")

    def to_dict(self):
        d = super().to_dict()
        d.update(model=self.model, expected=list(self.expected), got=list(self.got))
        return d


class NonBinaryEntryError(ValidationError):
    code = "non_binary_entry"

    def __init__(self, model, row, col, value):
        self.model, self.row, self.col, self.value = model, row, col, value
        where = "truth" if model is None else f"model {model}"
        super().__init__(
            f"{where}: entry [{row}, {col}] = {value!r} is not 0 or 1"
        )

    def to_dict(self):
        d = super().to_dict()
        d.update(model=self.model, row=self.row, col=self.col)
        return d


class ParseError(MLCMError, ValueError):
    code = "parse_error"

    def __init__(self, path, line, message):
        self.path, self.line = str(path), line
        super().__init__(f"{path}:{line}: {message}")

    def to_dict(self):
        d = super().to_dict()
        d.update(path=self.path, line=self.line)
        return d


class RaggedRowError(ParseError):
    code = "ragged_row"


class SingularDegreeError(MLCMError, ValueError):
    """A zero-degree instance or group node reached a step that needs D^-1."""

    code = "singular_degree"


class SolverError(MLCMError, RuntimeError):
    code = "solver_failure"


class ConvergenceError(MLCMError, RuntimeError):
    code = "non_convergence"


class DegenerateTruthError(MLCMError, ValueError):
    code = "degenerate_truth"


class InfeasibleSpecError(MLCMError, ValueError):
    code = "infeasible_spec"
