"""K-means action codebook over flattened 8-pose clips.

A clip's discrete action label is the index of its nearest centroid. Soft
label scores are softmax(-distance / tau) over the centroids, a geometric
stand-in for a classifier's softmax output, and the agreement between two
score vectors is judged by cross-entropy against each other's argmax.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .skeleton import CLIP_LEN, N_JOINTS, pose_clip_vector

__all__ = [
    "CLIP_DIM",
    "DEFAULT_K",
    "ActionLabel",
    "ActionCodebook",
    "ActionAgreement",
    "fit_codebook",
    "assign_label",
    "label_scores",
    "action_agreement",
    "save_codebook",
    "load_codebook",
]

CLIP_DIM = CLIP_LEN * N_JOINTS * 3  # 456
DEFAULT_K = 400
DEFAULT_TAU = 0.1

# Log arguments are clamped here so cross-entropies stay finite.
_EPS_LOG = 1e-12

_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ActionLabel:
    """Discrete action id: index into the codebook centroids."""

    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"action label index must be non-negative, got {self.index}")


class ActionCodebook:
    """Immutable set of K centroids in clip-vector space."""

    __slots__ = ("_centroids", "seed", "sse_history")

    def __init__(self, centroids, seed=None, sse_history=()):
        c = np.asarray(centroids, dtype=float)
        if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] != CLIP_DIM:
            raise ValueError(f"centroids must be (k, {CLIP_DIM}) with k >= 1, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("centroids must be finite")
        if np.unique(c, axis=0).shape[0] != c.shape[0]:
            raise ValueError("centroids must be pairwise distinct")
        self._centroids = c.copy()
        self._centroids.setflags(write=False)
        self.seed = seed
        self.sse_history = tuple(sse_history)

    @property
    def centroids(self):
        return self._centroids

    @property
    def k(self):
        return self._centroids.shape[0]

    def distances(self, vector):
        """Euclidean distance from a clip vector to every centroid."""
        v = np.asarray(vector, dtype=float)
        if v.shape != (CLIP_DIM,):
            raise ValueError(f"clip vector must have {CLIP_DIM} components, got shape {v.shape}")
        return np.sqrt(_pairwise_sq_distances(v[None, :], self._centroids)[0])


@dataclass(frozen=True)
class ActionAgreement:
    """Cross-entropy pair plus a [0, 1] agreement between two label score vectors."""

    agreement: float
    ego_cross_entropy: float
    third_cross_entropy: float
    ego_label: int
    third_label: int


def _pairwise_sq_distances(a, b):
    # |a|^2 + |b|^2 - 2 a.b, clipped against tiny negatives from cancellation
    d2 = (a * a).sum(axis=1)[:, None] + (b * b).sum(axis=1)[None, :] - 2.0 * (a @ b.T)
    return np.maximum(d2, 0.0)


def _seed_centroids(vectors, k, rng):
    # Distance-weighted seeding: each new seed is drawn with probability
    # proportional to squared distance from the already chosen set.
    n = vectors.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = _pairwise_sq_distances(vectors, vectors[chosen[-1]][None, :])[:, 0]
    for _ in range(1, k):
        total = float(d2.sum())
        if total > 0.0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            idx = int(rng.integers(n))
        chosen.append(idx)
        d2 = np.minimum(d2, _pairwise_sq_distances(vectors, vectors[idx][None, :])[:, 0])
    return vectors[chosen].copy()


def fit_codebook(clips, k, seed, max_iters=300) -> ActionCodebook:
    """Lloyd's algorithm on clip vectors, deterministic for a given seed.

    Stops when assignments stabilize or after max_iters. Empty clusters are
    re-seeded from the point currently farthest from its assigned centroid.
    The per-iteration sum of squared errors is recorded on the returned
    codebook and is non-increasing.
    """
    if k < 1:
        raise ValueError(f"cluster count must be >= 1, got {k}")
    clips = list(clips)
    if len(clips) < k:
        raise ValueError(f"need at least {k} clips to fit {k} clusters, got {len(clips)}")
    vectors = np.stack([pose_clip_vector(c) for c in clips])
    rng = np.random.default_rng(seed)
    centroids = _seed_centroids(vectors, k, rng)

    n = vectors.shape[0]
    history = []
    previous = None
    for _ in range(max_iters):
        d2 = _pairwise_sq_distances(vectors, centroids)
        labels = np.argmin(d2, axis=1)
        # SSE from explicit differences; the norm-expansion shortcut used for
        # the argmin loses absolute accuracy through cancellation
        history.append(float(((vectors - centroids[labels]) ** 2).sum()))
        if previous is not None and np.array_equal(labels, previous):
            break
        previous = labels

        new_centroids = centroids.copy()
        counts = np.bincount(labels, minlength=k)
        for j in np.flatnonzero(counts > 0):
            new_centroids[j] = vectors[labels == j].mean(axis=0)
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            # farthest points first, each used at most once
            order = np.argsort(-d2[np.arange(n), labels], kind="stable")
            for j, idx in zip(empty, order):
                new_centroids[j] = vectors[idx]
        centroids = new_centroids

    return ActionCodebook(centroids, seed=seed, sse_history=history)


def assign_label(codebook: ActionCodebook, clip) -> ActionLabel:
    """Nearest centroid index; ties go to the lowest index."""
    d = codebook.distances(pose_clip_vector(clip))
    return ActionLabel(int(np.argmin(d)))


def label_scores(codebook: ActionCodebook, clip, tau=DEFAULT_TAU) -> np.ndarray:
    """softmax(-distance / tau) over the centroids; sums to 1."""
    if tau <= 0.0:
        raise ValueError(f"temperature must be positive, got {tau}")
    d = codebook.distances(pose_clip_vector(clip))
    w = np.exp(-(d - d.min()) / tau)
    return w / w.sum()


def _check_scores(scores, k, name):
    s = np.asarray(scores, dtype=float)
    if s.shape != (k,):
        raise ValueError(f"{name} must have {k} entries, got shape {s.shape}")
    if not np.all(np.isfinite(s)) or np.any(s < 0.0):
        raise ValueError(f"{name} must be finite and non-negative")
    if abs(float(s.sum()) - 1.0) > 1e-6:
        raise ValueError(f"{name} must sum to 1 within 1e-6, got {float(s.sum())}")
    return s


def action_agreement(ego_label_scores, third_label_scores, codebook: ActionCodebook, tau=DEFAULT_TAU) -> ActionAgreement:
    """Score how well two label distributions name the same action.

    Each vector is scored by cross-entropy against the other's argmax taken
    as a one-hot indicator. Agreement is 1 when the argmaxes coincide and
    otherwise decays with the distance between the two named centroids.
    """
    ego = _check_scores(ego_label_scores, codebook.k, "ego_label_scores")
    third = _check_scores(third_label_scores, codebook.k, "third_label_scores")
    ego_label = int(np.argmax(ego))
    third_label = int(np.argmax(third))
    ego_ce = -math.log(max(float(ego[third_label]), _EPS_LOG))
    third_ce = -math.log(max(float(third[ego_label]), _EPS_LOG))
    if ego_label == third_label:
        agreement = 1.0
    else:
        gap = float(np.linalg.norm(codebook.centroids[ego_label] - codebook.centroids[third_label]))
        agreement = math.exp(-gap / tau)
    return ActionAgreement(agreement, ego_ce, third_ce, ego_label, third_label)


def save_codebook(codebook: ActionCodebook, path) -> None:
    """Write the codebook as JSON; floats round-trip bit-exactly."""
    payload = {
        "schema_version": _SCHEMA_VERSION,
        "kind": "action_codebook",
        "k": codebook.k,
        "dim": CLIP_DIM,
        "seed": codebook.seed,
        "centroids": codebook.centroids.tolist(),
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


def load_codebook(path) -> ActionCodebook:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("kind") != "action_codebook":
        raise ValueError(f"{path} is not an action codebook file")
    if payload.get("dim") != CLIP_DIM:
        raise ValueError(f"codebook dimension {payload.get('dim')} does not match {CLIP_DIM}")
    return ActionCodebook(np.array(payload["centroids"], dtype=float), seed=payload.get("seed"))
