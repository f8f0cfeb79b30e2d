"""circRNA-disease association prediction.

Multi-source similarity fusion (sequence alignment + Gaussian interaction
profile kernels), thresholded heterogeneous graph construction, and a
two-layer message-passing graph convolution network with hand-written
backpropagation, plus a k-fold cross-validation harness.
"""

from ._core import (  # noqa: F401
    Aggregator,
    AssociationMatrix,
    CvResult,
    Dataset,
    EvalConfig,
    FoldResult,
    FusionPolicy,
    GipConfig,
    GipFrom,
    Graph,
    GraphConfig,
    GraphStats,
    MetricsRecord,
    ModelParams,
    ScoringScheme,
    SequenceSet,
    SimilarityMatrix,
    SyntheticSpec,
    TrainConfig,
    TrainHistory,
    UsageError,
    DataError,
    NumericError,
    auc,
    build_graph,
    circ_gip,
    cross_validate,
    disease_gip,
    fuse_circ_similarity,
    graph_stats,
    init_params,
    kfold_split,
    nw_score,
    parse_associations,
    parse_fasta,
    predict,
    rank_predictions,
    run_cli,
    sequence_similarity,
    synth_dataset,
    train,
    __version__,
)
