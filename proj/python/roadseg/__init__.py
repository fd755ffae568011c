"""Disparity transformation and road segmentation.

Estimates the stereo-rig roll angle from a dense disparity map, fits a
quadratic vertical road profile through the v-disparity histogram, flattens
road disparities to a constant level and extracts the road mask by Otsu
thresholding. Includes a synthetic ground-truth harness for accuracy sweeps.
"""

from roadseg._core import (  # noqa: F401
    DisparityImage,
    Error,
    GssConfig,
    InsetRegion,
    NoiseKind,
    OptimalPath,
    PathEntry,
    PipelineConfig,
    PipelineResult,
    QuadraticRoadModel,
    RansacConfig,
    RansacResult,
    RasterOptions,
    RollEstimate,
    SegmentationMask,
    StageTimings,
    SweepRecord,
    SweepReport,
    SyntheticSpec,
    VDisparityHistogram,
    __version__,
    add_noise,
    build_vdisparity,
    energy_at_gamma,
    estimate_roll_gss,
    extract_path_dp,
    generate_ground_truth,
    ground_truth_labels,
    otsu_threshold,
    ransac_parabola,
    read_disparity,
    rotate_coords,
    rotate_map,
    run_accuracy_sweep,
    run_segment_pipeline,
    scan_energy_curve,
    segment_road,
    sweep_to_csv,
    sweep_to_json,
    transform_map,
    uniform_angles,
    write_disparity,
    write_mask_png,
)
