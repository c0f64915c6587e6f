"""Fuzzy c-means clustering, rule extraction, inference, and incremental retraining.

A model is built by clustering the joint (input, target) space with fuzzy
c-means, turning each cluster into one rule with Gaussian antecedents and a
linear consequent per output, and predicting with the firing-strength
weighted average of the rule consequents. Incremental updates append rows to
the accumulated history and re-cluster warm-started from the previous rule
centers, so the rule base evolves as data arrives one-by-one or block-wise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, DomainError, InsufficientDataError

__all__ = [
    "WIDTH_FLOOR",
    "TrainConfig",
    "FcmResult",
    "fcm_cluster",
    "FuzzyRule",
    "FisModel",
    "build_fis",
    "fis_predict",
    "predict_batch",
    "TrainingHistory",
    "evolve_update",
    "model_to_dict",
    "model_from_dict",
    "save_model",
    "load_model",
]

# minimum Gaussian sigma in normalized units; prevents zero-width singularities
WIDTH_FLOOR = 0.01

# singular values below this fraction of the largest are truncated in the
# consequent solve; directions this degenerate (normal-equation condition
# beyond ~1e12, e.g. exactly collinear input columns) carry no signal
_LSTSQ_RCOND = 1e-10


@dataclass(frozen=True)
class TrainConfig:
    """Clustering and rule-extraction settings."""

    n_clusters: int = 30
    fuzzy_exponent_m: float = 2.0
    max_iter: int = 5000
    epsilon: float = 1e-5
    seed: int = 0

    def __post_init__(self):
        if self.n_clusters < 1:
            raise ConfigError(f"n_clusters must be >= 1, got {self.n_clusters}")
        if not self.fuzzy_exponent_m > 1.0:
            raise ConfigError(f"fuzzy exponent must be > 1, got {self.fuzzy_exponent_m}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
        if not self.epsilon > 0.0:
            raise ConfigError(f"epsilon must be > 0, got {self.epsilon}")


@dataclass(frozen=True)
class FcmResult:
    """Converged (or iteration-capped) fuzzy c-means state."""

    centers: np.ndarray  # (n_clusters, n_dims)
    memberships: np.ndarray  # (n_rows, n_clusters), rows sum to 1
    iterations_used: int
    final_shift: float
    objective_history: tuple[float, ...] = ()


def _memberships(data: np.ndarray, centers: np.ndarray, m: float):
    """Membership matrix and distances for fixed centers.

    Rows coincident with one or more centers get full membership split
    equally among the exact-zero (or overflow-near-zero) distances.
    """
    diff = data[:, None, :] - centers[None, :, :]
    dist = np.sqrt(np.einsum("ncd,ncd->nc", diff, diff))
    power = 2.0 / (m - 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        inv = dist**-power
    hits = ~np.isfinite(inv)
    coincident = hits.any(axis=1)
    u = np.zeros_like(dist)
    if np.any(~coincident):
        w = inv[~coincident]
        u[~coincident] = w / w.sum(axis=1, keepdims=True)
    if np.any(coincident):
        h = hits[coincident].astype(float)
        u[coincident] = h / h.sum(axis=1, keepdims=True)
    return u, dist


def fcm_cluster(
    data, cfg: TrainConfig, init_centers: Optional[np.ndarray] = None
) -> FcmResult:
    """Fuzzy c-means on ``data`` rows.

    Alternates membership and center updates until the largest absolute
    center shift falls below ``cfg.epsilon`` or ``cfg.max_iter`` is reached.
    Initial centers are ``init_centers`` when given (warm start), otherwise a
    seeded random selection of data rows.

    Parameters
    ----------
    data : array_like, shape (n_rows, n_dims)
    cfg : TrainConfig
    init_centers : array_like, shape (n_clusters, n_dims), optional

    Returns
    -------
    FcmResult
    """
    data = np.atleast_2d(np.asarray(data, dtype=float))
    n_rows, n_dims = data.shape
    if not np.all(np.isfinite(data)):
        raise DomainError("clustering data must be finite")
    if cfg.n_clusters > n_rows:
        raise ConfigError(f"n_clusters={cfg.n_clusters} exceeds the {n_rows} data rows")
    if init_centers is None:
        rng = np.random.default_rng(cfg.seed)
        centers = data[rng.choice(n_rows, size=cfg.n_clusters, replace=False)].copy()
    else:
        centers = np.atleast_2d(np.asarray(init_centers, dtype=float)).copy()
        if centers.shape != (cfg.n_clusters, n_dims):
            raise ConfigError(
                f"init_centers shape {centers.shape} != ({cfg.n_clusters}, {n_dims})"
            )
        if not np.all(np.isfinite(centers)):
            raise DomainError("init_centers must be finite")

    m = cfg.fuzzy_exponent_m
    u, dist = _memberships(data, centers, m)
    history = []
    shift = np.inf
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        um = u**m
        mass = um.sum(axis=0)
        new_centers = np.where(
            mass[:, None] > 0.0, (um.T @ data) / np.maximum(mass, 1e-300)[:, None], centers
        )
        shift = float(np.abs(new_centers - centers).max())
        centers = new_centers
        u, dist = _memberships(data, centers, m)
        objective = float(((u**m) * dist**2).sum())
        if history:
            assert objective <= history[-1] * (1.0 + 1e-9) + 1e-12, (
                "fcm objective increased"
            )
        history.append(objective)
        if shift < cfg.epsilon:
            break
    return FcmResult(centers, u, iterations, shift, tuple(history))


@dataclass(frozen=True)
class FuzzyRule:
    """Gaussian-antecedent rule with one linear consequent row per output.

    Centers, widths, and the cluster's output coordinates live in normalized
    units; consequent rows are laid out as ``(w0, w1, ..., wd)`` with the
    bias first. ``center_outputs`` is the target part of the rule's cluster
    center, kept for warm-started retraining and constant fallbacks.
    """

    centers: np.ndarray  # (n_inputs,)
    widths: np.ndarray  # (n_inputs,), all >= WIDTH_FLOOR
    consequents: np.ndarray  # (n_outputs, n_inputs + 1)
    center_outputs: np.ndarray  # (n_outputs,)


@dataclass(frozen=True)
class FisModel:
    """Takagi-Sugeno rule base plus the min-max normalization it was fit under."""

    rules: tuple[FuzzyRule, ...]
    input_norms: tuple[tuple[float, float], ...]  # (offset, scale) per input
    output_norms: tuple[tuple[float, float], ...]  # (offset, scale) per output
    config: TrainConfig
    degenerate_inputs: tuple[int, ...] = ()
    degenerate_outputs: tuple[int, ...] = ()

    @property
    def n_inputs(self) -> int:
        return len(self.input_norms)

    @property
    def n_outputs(self) -> int:
        return len(self.output_norms)


def _column_norms(arr: np.ndarray) -> tuple[list[tuple[float, float]], list[int]]:
    lo = arr.min(axis=0)
    span = arr.max(axis=0) - lo
    degenerate = [int(d) for d in np.nonzero(span == 0.0)[0]]
    span = np.where(span == 0.0, 1.0, span)
    return [(float(o), float(s)) for o, s in zip(lo, span)], degenerate


def _normalize(arr: np.ndarray, norms) -> np.ndarray:
    offsets = np.array([o for o, _ in norms])
    scales = np.array([s for _, s in norms])
    return (arr - offsets) / scales


def _denormalize(arr: np.ndarray, norms) -> np.ndarray:
    offsets = np.array([o for o, _ in norms])
    scales = np.array([s for _, s in norms])
    return arr * scales + offsets


def _coerce_2d(arr, name: str) -> np.ndarray:
    arr = np.asarray(arr, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise DomainError(f"{name} must be a matrix, got {arr.ndim} dimensions")
    return arr


def build_fis(inputs, targets, cfg: TrainConfig, init_centers=None) -> FisModel:
    """Extract a rule base from paired inputs and targets.

    Both matrices are min-max normalized to [0, 1] per dimension, clustered
    jointly, and each cluster becomes one rule: the antecedent center is the
    input part of the cluster center, widths are the membership-weighted
    standard deviations (floored at ``WIDTH_FLOOR``), and consequents come
    from per-rule weighted least squares with weights ``u^m``, solved by
    truncated SVD so that degenerate directions (collinear input columns)
    are dropped rather than amplified. A rule with no usable fit falls back
    to a constant consequent equal to the target part of its cluster center.

    Parameters
    ----------
    inputs : array_like, shape (n_rows, n_inputs)
    targets : array_like, shape (n_rows, n_outputs) or (n_rows,)
    cfg : TrainConfig
    init_centers : array_like, shape (n_clusters, n_inputs + n_outputs), optional
        Warm-start cluster centers in raw (unnormalized) joint units.

    Returns
    -------
    FisModel
    """
    X = _coerce_2d(inputs, "inputs")
    T = _coerce_2d(targets, "targets")
    if X.shape[0] != T.shape[0]:
        raise DomainError(f"{X.shape[0]} input rows but {T.shape[0]} target rows")
    if X.shape[0] == 0:
        raise InsufficientDataError("cannot train on zero rows")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(T))):
        raise DomainError("training data must be finite")
    if cfg.n_clusters > X.shape[0]:
        raise ConfigError(f"n_clusters={cfg.n_clusters} exceeds the {X.shape[0]} training rows")

    in_norms, bad_in = _column_norms(X)
    out_norms, bad_out = _column_norms(T)
    Xn = _normalize(X, in_norms)
    Tn = _normalize(T, out_norms)
    joint = np.hstack([Xn, Tn])

    warm = None
    if init_centers is not None:
        warm = _normalize(
            np.atleast_2d(np.asarray(init_centers, dtype=float)), in_norms + out_norms
        )
    fcm = fcm_cluster(joint, cfg, init_centers=warm)

    d_in = X.shape[1]
    design = np.hstack([np.ones((X.shape[0], 1)), Xn])
    m = cfg.fuzzy_exponent_m
    rules = []
    for j in range(cfg.n_clusters):
        u_j = fcm.memberships[:, j]
        w = u_j**m
        center_in = fcm.centers[j, :d_in]
        center_out = fcm.centers[j, d_in:]
        mass = w.sum()
        if mass > 0.0:
            var = (w[:, None] * (Xn - center_in) ** 2).sum(axis=0) / mass
            widths = np.maximum(np.sqrt(var), WIDTH_FLOOR)
        else:
            widths = np.full(d_in, WIDTH_FLOOR)
        consequents = None
        if mass > 0.0:
            sw = np.sqrt(w)[:, None]
            coef, *_ = np.linalg.lstsq(design * sw, Tn * sw, rcond=_LSTSQ_RCOND)
            if np.all(np.isfinite(coef)):
                consequents = coef.T
        if consequents is None:
            # no usable fit: degrade to a constant at the cluster's target
            consequents = np.zeros((T.shape[1], d_in + 1))
            consequents[:, 0] = center_out
        rules.append(FuzzyRule(center_in.copy(), widths, consequents, center_out.copy()))

    return FisModel(
        rules=tuple(rules),
        input_norms=tuple(in_norms),
        output_norms=tuple(out_norms),
        config=cfg,
        degenerate_inputs=tuple(bad_in),
        degenerate_outputs=tuple(bad_out),
    )


def _rule_arrays(model: FisModel):
    centers = np.stack([r.centers for r in model.rules])
    widths = np.stack([r.widths for r in model.rules])
    consequents = np.stack([r.consequents for r in model.rules])
    return centers, widths, consequents


def _joint_centers(model: FisModel) -> np.ndarray:
    """Rule cluster centers in raw joint (input, output) units."""
    centers = np.stack([r.centers for r in model.rules])
    outputs = np.stack([r.center_outputs for r in model.rules])
    return np.hstack(
        [_denormalize(centers, model.input_norms), _denormalize(outputs, model.output_norms)]
    )


def predict_batch(model: FisModel, inputs) -> np.ndarray:
    """Vectorized inference over input rows; returns (n_rows, n_outputs)."""
    X = _coerce_2d(inputs, "inputs")
    if X.shape[1] != model.n_inputs:
        raise DomainError(
            f"model takes {model.n_inputs}-dimensional inputs, got {X.shape[1]}"
        )
    if not np.all(np.isfinite(X)):
        raise DomainError("prediction inputs must be finite")
    Xn = _normalize(X, model.input_norms)
    centers, widths, consequents = _rule_arrays(model)
    z = (Xn[:, None, :] - centers[None, :, :]) / widths[None, :, :]
    firing = np.exp(-0.5 * (z**2).sum(axis=2))  # (n_rows, n_rules)
    design = np.hstack([np.ones((Xn.shape[0], 1)), Xn])
    rule_out = np.einsum("rop,np->nro", consequents, design)  # (n_rows, n_rules, n_out)
    total = firing.sum(axis=1)
    out_n = np.zeros((Xn.shape[0], model.n_outputs))
    live = total > 0.0
    if np.any(live):
        out_n[live] = (firing[live, :, None] * rule_out[live]).sum(axis=1) / total[
            live, None
        ]
    if np.any(~live):
        # all firing strengths underflowed: use the nearest antecedent center
        dead = np.nonzero(~live)[0]
        d2 = ((Xn[dead, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        nearest = d2.argmin(axis=1)
        out_n[dead] = rule_out[dead, nearest]
    return _denormalize(out_n, model.output_norms)


def fis_predict(model: FisModel, x) -> np.ndarray:
    """Inference for a single input vector; returns the output vector."""
    x = np.asarray(x, dtype=float).ravel()
    return predict_batch(model, x[None, :])[0]


class TrainingHistory:
    """Append-only store of every training row seen so far."""

    def __init__(self, inputs=None, targets=None):
        self._inputs: list[np.ndarray] = []
        self._targets: list[np.ndarray] = []
        if inputs is not None or targets is not None:
            self.append(inputs, targets)

    def append(self, inputs, targets) -> None:
        X = _coerce_2d(inputs, "inputs")
        T = _coerce_2d(targets, "targets")
        if X.shape[0] != T.shape[0]:
            raise DomainError(f"{X.shape[0]} input rows but {T.shape[0]} target rows")
        if X.shape[0] == 0:
            return
        if self._inputs and (
            X.shape[1] != self._inputs[0].shape[1] or T.shape[1] != self._targets[0].shape[1]
        ):
            raise DomainError("appended rows do not match the history dimensionality")
        self._inputs.append(X)
        self._targets.append(T)

    @property
    def inputs(self) -> np.ndarray:
        if not self._inputs:
            raise InsufficientDataError("history is empty")
        return np.vstack(self._inputs)

    @property
    def targets(self) -> np.ndarray:
        if not self._targets:
            raise InsufficientDataError("history is empty")
        return np.vstack(self._targets)

    def __len__(self) -> int:
        return sum(x.shape[0] for x in self._inputs)


def evolve_update(
    model: FisModel, new_inputs, new_targets, history: TrainingHistory
) -> FisModel:
    """Fold new rows into the model.

    The rows are appended to ``history``, normalization is recomputed over
    the full accumulated data, and the rule base is re-extracted warm-started
    from the previous model's joint cluster centers mapped back to raw units
    (so clustering resumes from the previous optimum under the new
    normalization). Batches of any size are accepted; an empty batch returns
    the model unchanged.
    """
    X = _coerce_2d(new_inputs, "new_inputs")
    T = _coerce_2d(new_targets, "new_targets")
    if X.shape[0] == 0:
        return model
    if X.shape[1] != model.n_inputs or T.shape[1] != model.n_outputs:
        raise DomainError(
            f"batch is {X.shape[1]}->{T.shape[1]} dimensional, "
            f"model is {model.n_inputs}->{model.n_outputs}"
        )
    history.append(X, T)
    warm = _joint_centers(model)
    return build_fis(history.inputs, history.targets, model.config, init_centers=warm)


def model_to_dict(model: FisModel) -> dict:
    """JSON-ready representation; floats survive a round trip losslessly."""
    return {
        "config": {
            "n_clusters": model.config.n_clusters,
            "fuzzy_exponent_m": model.config.fuzzy_exponent_m,
            "max_iter": model.config.max_iter,
            "epsilon": model.config.epsilon,
            "seed": model.config.seed,
        },
        "input_norms": [list(n) for n in model.input_norms],
        "output_norms": [list(n) for n in model.output_norms],
        "degenerate_inputs": list(model.degenerate_inputs),
        "degenerate_outputs": list(model.degenerate_outputs),
        "rules": [
            {
                "centers": r.centers.tolist(),
                "widths": r.widths.tolist(),
                "consequents": r.consequents.tolist(),
                "center_outputs": r.center_outputs.tolist(),
            }
            for r in model.rules
        ],
    }


def model_from_dict(payload: dict) -> FisModel:
    cfg = TrainConfig(**payload["config"])
    rules = tuple(
        FuzzyRule(
            centers=np.asarray(r["centers"], dtype=float),
            widths=np.asarray(r["widths"], dtype=float),
            consequents=np.atleast_2d(np.asarray(r["consequents"], dtype=float)),
            center_outputs=np.asarray(r["center_outputs"], dtype=float),
        )
        for r in payload["rules"]
    )
    return FisModel(
        rules=rules,
        input_norms=tuple((float(o), float(s)) for o, s in payload["input_norms"]),
        output_norms=tuple((float(o), float(s)) for o, s in payload["output_norms"]),
        config=cfg,
        degenerate_inputs=tuple(int(d) for d in payload.get("degenerate_inputs", ())),
        degenerate_outputs=tuple(int(d) for d in payload.get("degenerate_outputs", ())),
    )


def save_model(model: FisModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")


def load_model(path) -> FisModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
