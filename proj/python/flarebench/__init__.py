"""Python surface of the flarebench core library."""

from ._core import (
    BoundingBox,
    Detection,
    __version__,
    augment_flare,
    chroma_clamp_denoise,
    classify_day_night,
    combine,
    compute_metrics,
    detection_loss,
    fps_from_mean_ms,
    improvement_percent,
    iou,
    mean_brightness,
    overhead_percent,
    reference_detect,
    simulate,
    spectrum,
)

__all__ = [
    "BoundingBox",
    "Detection",
    "__version__",
    "augment_flare",
    "chroma_clamp_denoise",
    "classify_day_night",
    "combine",
    "compute_metrics",
    "detection_loss",
    "fps_from_mean_ms",
    "improvement_percent",
    "iou",
    "mean_brightness",
    "overhead_percent",
    "reference_detect",
    "simulate",
    "spectrum",
]
