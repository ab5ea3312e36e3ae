"""Cross-view verification: does an ego motion stream belong to a candidate?

Scoring runs two channels per candidate, both seeded from that candidate's
own first observed pose (each hypothesis is tried in its own frame):

* action: the ego pose deltas are integrated from the candidate's frame-0
  pose and the resulting clip is compared, through codebook label scores,
  against the candidate's observed pose clip (a cross-entropy in each
  direction);
* motion: the ego rigid-motion increments are integrated from the body frame
  of the candidate's frame-0 pose and compared by L1 against the candidate's
  bounding-box track; a second L1 checks the candidate's own pose-derived
  track against the same boxes.

The total is a weighted sum of the four terms and the match probability is
exp(-total / sigma). Scoring is pure; candidates may be scored concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .action_codebook import DEFAULT_TAU, ActionCodebook, action_agreement, label_scores
from .motion import (
    BoundingBox,
    EgoMotionClip,
    bbox_trajectory,
    integrate_ego_motion,
    third_view_translation_from_deltas,
    trajectory_l1_loss,
)
from .skeleton import (
    CLIP_LEN,
    Joint19Pose,
    PoseDelta,
    PoseSequence,
    body_center,
    body_frame,
    integrate_pose_deltas,
)

__all__ = [
    "InsufficientObservationError",
    "ScoringConfig",
    "EgoObservation",
    "CandidateObservation",
    "VerificationScore",
    "verify_pair",
    "localize",
    "score_record",
]


class InsufficientObservationError(ValueError):
    """Raised when a candidate has no valid frame to verify against."""


@dataclass(frozen=True)
class ScoringConfig:
    """Channel weights and scales. All default to the unit configuration."""

    action_weight: float = 1.0
    motion_weight: float = 1.0
    sigma: float = 1.0
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        if self.action_weight < 0.0 or self.motion_weight < 0.0:
            raise ValueError("channel weights must be non-negative")
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.tau <= 0.0:
            raise ValueError(f"tau must be positive, got {self.tau}")


class EgoObservation:
    """What the ego stream contributes for one clip.

    handoff_pose is the wearer's own frame-0 third-view pose estimate; the
    per-candidate scoring re-seeds from each candidate's frame-0 pose instead,
    so the handoff mainly matters for consumers that want a single default
    initialization.
    """

    __slots__ = ("handoff_pose", "pose_deltas", "motion")

    def __init__(self, handoff_pose: Joint19Pose, pose_deltas, motion: EgoMotionClip):
        if not isinstance(handoff_pose, Joint19Pose):
            raise ValueError("handoff_pose must be a Joint19Pose")
        pose_deltas = tuple(pose_deltas)
        if len(pose_deltas) != CLIP_LEN - 1:
            raise ValueError(f"expected {CLIP_LEN - 1} pose deltas, got {len(pose_deltas)}")
        for d in pose_deltas:
            if not isinstance(d, PoseDelta):
                raise ValueError("pose_deltas entries must be PoseDelta")
        if not isinstance(motion, EgoMotionClip):
            raise ValueError("motion must be an EgoMotionClip")
        self.handoff_pose = handoff_pose
        self.pose_deltas = pose_deltas
        self.motion = motion


class CandidateObservation:
    """One tracked person in the third view over a clip window."""

    __slots__ = ("person_id", "poses", "boxes", "valid")

    def __init__(self, person_id, poses: PoseSequence, boxes, valid=None):
        self.person_id = int(person_id)
        if not isinstance(poses, PoseSequence) or not poses.is_clip():
            raise ValueError("candidate poses must be a full 8-pose sequence")
        boxes = tuple(boxes)
        if len(boxes) != CLIP_LEN:
            raise ValueError(f"expected {CLIP_LEN} bounding boxes, got {len(boxes)}")
        for b in boxes:
            if not isinstance(b, BoundingBox):
                raise ValueError("boxes entries must be BoundingBox")
        if valid is None:
            valid = (True,) * CLIP_LEN
        valid = tuple(bool(v) for v in valid)
        if len(valid) != CLIP_LEN:
            raise ValueError(f"expected {CLIP_LEN} validity flags, got {len(valid)}")
        self.poses = poses
        self.boxes = boxes
        self.valid = valid

    def fully_valid(self):
        return all(self.valid)


@dataclass(frozen=True)
class VerificationScore:
    """Per-channel losses, their weighted total, and the match probability."""

    total: float
    action_ego_ce: float
    action_third_ce: float
    motion_ego_l1: float
    motion_third_l1: float
    match_probability: float


def _pose_track_deltas(poses: PoseSequence) -> np.ndarray:
    centers = np.array([body_center(p)[:2] for p in poses])
    return np.diff(centers, axis=0)


def verify_pair(
    ego: EgoObservation,
    candidate: CandidateObservation,
    codebook: ActionCodebook,
    config: ScoringConfig = ScoringConfig(),
) -> VerificationScore:
    """Score one candidate against the ego stream.

    Raises InsufficientObservationError when every frame of the candidate is
    occluded, and DegeneratePoseError when its frame-0 pose cannot anchor a
    body frame.
    """
    if not any(candidate.valid):
        raise InsufficientObservationError(
            f"candidate {candidate.person_id} has no valid frame in this clip"
        )
    seed_pose = candidate.poses[0]

    ego_sequence = integrate_pose_deltas(seed_pose, ego.pose_deltas)
    ego_scores = label_scores(codebook, ego_sequence, tau=config.tau)
    third_scores = label_scores(codebook, candidate.poses, tau=config.tau)
    agreement = action_agreement(ego_scores, third_scores, codebook, tau=config.tau)

    box_track = bbox_trajectory(candidate.boxes)
    ego_track = integrate_ego_motion(ego.motion.with_t_init(body_frame(seed_pose)))
    motion_ego_l1 = trajectory_l1_loss(ego_track, box_track)
    pose_track = third_view_translation_from_deltas(_pose_track_deltas(candidate.poses))
    motion_third_l1 = trajectory_l1_loss(pose_track, box_track)

    total = config.action_weight * (agreement.ego_cross_entropy + agreement.third_cross_entropy) + config.motion_weight * (
        motion_ego_l1 + motion_third_l1
    )
    return VerificationScore(
        total=total,
        action_ego_ce=agreement.ego_cross_entropy,
        action_third_ce=agreement.third_cross_entropy,
        motion_ego_l1=motion_ego_l1,
        motion_third_l1=motion_third_l1,
        match_probability=float(np.exp(-total / config.sigma)),
    )


def localize(ego, candidates, codebook, config: ScoringConfig = ScoringConfig()):
    """Pick the wearer among candidates by maximum match probability.

    Returns (person_id, scores) with scores ordered like the input candidate
    list; ties go to the lowest person id.
    """
    candidates = list(candidates)
    if not candidates:
        raise ValueError("localize requires at least one candidate")
    scores = [verify_pair(ego, c, codebook, config) for c in candidates]
    ranked = sorted(
        range(len(candidates)),
        key=lambda i: (-scores[i].match_probability, candidates[i].person_id),
    )
    return candidates[ranked[0]].person_id, scores


def score_record(clip_id, person_id, score: VerificationScore) -> dict:
    """JSON-ready record for one scored (clip, candidate) pair."""
    return {
        "clip_id": clip_id,
        "person_id": person_id,
        "components": {
            "action_ego_ce": score.action_ego_ce,
            "action_third_ce": score.action_third_ce,
            "motion_ego_l1": score.motion_ego_l1,
            "motion_third_l1": score.motion_third_l1,
        },
        "total": score.total,
        "match_probability": score.match_probability,
    }
