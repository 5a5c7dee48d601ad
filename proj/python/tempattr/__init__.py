"""Temporal occlusion attribution for multichannel epoch recordings."""

from ._core import (
    AggregateResult,
    AttributionGrid,
    Dendrogram,
    EmbeddingKind,
    EmbeddingMatrix,
    EncoderSpec,
    EpochSet,
    Error,
    MaskSpec,
    Merge,
    PlantSpec,
    PlantWindow,
    RecoveryScore,
    RidgeModel,
    RidgeScore,
    Rng,
    SweepResult,
    SymMatrix,
    SynthData,
    TrialMeta,
    agglomerate,
    aggregate_curves,
    average_repetitions,
    cluster_cut,
    distance_matrix,
    dtw,
    encode,
    encode_batch,
    expand_to_trials,
    generate,
    mask_epoch,
    mask_key,
    mask_sweep,
    pearson,
    read_dendrogram_json,
    read_embeddings,
    read_epochs,
    read_grid,
    read_grid_csv,
    read_model,
    read_plant_spec,
    render_curves_svg,
    render_dendrogram_svg,
    ridge_fit,
    ridge_predict,
    ridge_predict_batch,
    ridge_score,
    score_recovery,
    top_k_concepts,
    trial_uid,
    write_dendrogram_json,
    write_embeddings,
    write_epochs,
    write_grid,
    write_grid_csv,
    write_model,
    write_plant_spec,
)

__all__ = [
    "AggregateResult",
    "AttributionGrid",
    "Dendrogram",
    "EmbeddingKind",
    "EmbeddingMatrix",
    "EncoderSpec",
    "EpochSet",
    "Error",
    "MaskSpec",
    "Merge",
    "PlantSpec",
    "PlantWindow",
    "RecoveryScore",
    "RidgeModel",
    "RidgeScore",
    "Rng",
    "SweepResult",
    "SymMatrix",
    "SynthData",
    "TrialMeta",
    "agglomerate",
    "aggregate_curves",
    "average_repetitions",
    "cluster_cut",
    "distance_matrix",
    "dtw",
    "encode",
    "encode_batch",
    "expand_to_trials",
    "generate",
    "mask_epoch",
    "mask_key",
    "mask_sweep",
    "pearson",
    "read_dendrogram_json",
    "read_embeddings",
    "read_epochs",
    "read_grid",
    "read_grid_csv",
    "read_model",
    "read_plant_spec",
    "render_curves_svg",
    "render_dendrogram_svg",
    "ridge_fit",
    "ridge_predict",
    "ridge_predict_batch",
    "ridge_score",
    "score_recovery",
    "top_k_concepts",
    "trial_uid",
    "write_dendrogram_json",
    "write_embeddings",
    "write_epochs",
    "write_grid",
    "write_grid_csv",
    "write_model",
    "write_plant_spec",
]
