"""Citation-based ground truth and content-based recommender evaluation."""

from .corpus import (
    Corpus,
    IngestOptions,
    IngestReport,
    Publication,
    Researcher,
    YearWindow,
    ingest_corpus,
    load_corpus,
    publications_of,
    references_of,
)
from .groundtruth import (
    ExperimentDataset,
    GroundTruthSet,
    SelectionCriteria,
    TimelineConfig,
    build_candidate_pool,
    build_experiment_dataset,
    extract_future_references,
    read_manifest,
    select_target_researchers,
    write_manifest,
)
from .textvec import SparseVector, Vocabulary, build_vocabulary, tfidf_vector, tokenize
from .cbf import (
    ALL_METHODS,
    SURVEY_METHODS,
    CbfMethod,
    FeatureScheme,
    FeatureSpace,
    RankedList,
    build_experiment_vocabulary,
    cosine,
    rank_candidates,
)
from .evalmetrics import (
    METRICS,
    EvaluationTable,
    evaluate_methods,
    ndcg_at_k,
    reciprocal_rank,
)
from .statcorr import (
    CorrelationReport,
    DatasetStatistics,
    PairedSeries,
    correlate_tables,
    dataset_statistics,
    kendall,
    pearson,
    spearman,
)

__version__ = "0.1.0"
