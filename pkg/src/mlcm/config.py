from dataclasses import asdict, dataclass

from .exceptions import ValidationError

TIE_POLICIES = ("strict", "half")


def check_alpha(alpha):
    """Return ``alpha`` if it is ``"auto"`` or a positive finite number."""
    if isinstance(alpha, str):
        if alpha != "auto":
            raise ValidationError(f"alpha must be a positive number or 'auto', got {alpha!r}")
        return alpha
    if isinstance(alpha, bool) or not (0 < alpha < float("inf")):
        raise ValidationError(f"alpha must be > 0, got {alpha}")
    return alpha


@dataclass(frozen=True)
class ConsensusConfig:
    """Hyper-parameters shared by the combination methods.

    Parameters
    ----------
    alpha : float or "auto", default="auto"
        Strength of the pull of each group node towards its own label node.
        Larger values shorten the random walk; ``alpha -> inf`` reduces
        MLCM-r to row-normalized voting. ``"auto"`` uses the mean degree of
        the graph's non-empty group nodes, so a walk continues from an
        average node with probability one half.
    iters : int, default=1
        Upper bound on MLCM-a alternations. Further alternations shrink
        every weak covariance direction towards zero (see :mod:`mlcm.mlcma`).
    tol : float, default=1e-8
        Early-stop threshold on the max-abs change between MLCM-a iterates.
    ridge : float, default=1e-6
        Added to the diagonal of the label covariance before any solve.
    tie_policy : {"strict", "half"}, default="strict"
        How metrics credit tied scores.
    seed : int, default=0
        Recorded in reports; the combiners themselves are deterministic.
    center : bool, default=False
        Center scores before the MLCM-a covariance estimate.
    """

    alpha: float | str = "auto"
    iters: int = 1
    tol: float = 1e-8
    ridge: float = 1e-6
    tie_policy: str = "strict"
    seed: int = 0
    center: bool = False

    def __post_init__(self):
        check_alpha(self.alpha)
        if int(self.iters) != self.iters or self.iters < 1:
            raise ValidationError(f"iters must be a positive integer, got {self.iters}")
        if not self.tol > 0:
            raise ValidationError(f"tol must be > 0, got {self.tol}")
        if not self.ridge >= 0:
            raise ValidationError(f"ridge must be >= 0, got {self.ridge}")
        if self.tie_policy not in TIE_POLICIES:
            raise ValidationError(
                f"tie_policy must be one of {TIE_POLICIES}, got {self.tie_policy!r}"
            )
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def to_dict(self):
        return asdict(self)
