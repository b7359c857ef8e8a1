"""Retrospective affect annotation at a fraction of the labeling cost.

The package learns a per-moment affect utility from ordinal comparisons of
ground-truth trace segments, reconstructs a full-length trace for unseen
sessions, finds the inflection regions worth a human's attention, and
stitches sparse region annotations back into a continuous trace. Baseline
samplers, trend clustering, and agreement metrics round out the evaluation
loop, and a small HTTP service drives the region-annotation UI.

Layout:

- trace / sessions: data containers and CSV/JSON IO
- losses / pairing / model: ordinal objective and the numpy network
- inflection / interpolate: region detection and trace reassembly
- clustering: DTW k-medoids over GT traces (aux supervision)
- samplers / metrics / synth: baselines, scores, synthetic fixtures
- cli / service: pipeline driver and the annotation session API
"""

from .clustering import (ClusterAssignment, DtwParams, KScore, cluster,
                         cluster_report, dtw_distance, dtw_distance_matrix,
                         label_entropy, scan_k, select_k, silhouette_score)
from .errors import (CountTooLarge, DimensionMismatch, EmptyTrace,
                     LengthMismatch, NoGroundTruth, NoTrainingData,
                     RegionsOverlap, SessionTooShort, TooFewSessions,
                     TraceTooShort, UnknownFeature)
from .inflection import (InflectionConfig, InflectionRegion, detect_regions,
                         detection_indices, expand_and_merge, find_inflections,
                         gradient_complement, merge_intervals,
                         read_regions_json, write_regions_json)
from .interpolate import interpolate, interpolate_trace
from .losses import (Cutpoints, bce_grad_pair, bce_loss, bce_prob,
                     cross_entropy, oce_grad_pair, oce_loss, oce_probs,
                     softmax, total_loss)
from .metrics import (ccc, delta_te, dtw_similarity, region_f1, spearman_rho,
                      temporal_characteristics, time_efficiency)
from .model import (CHECKPOINT_FORMAT, ModelWeights, NetworkConfig,
                    TrainResult, forward, init_weights, load_checkpoint,
                    pair_accuracy, reconstruct, save_checkpoint, train,
                    train_regression, write_training_log)
from .pairing import (FIRST_INDEX, WINDOW_FRAMES, FeatureSegment, PairSample,
                      build_pairs, build_segments, label_to_class,
                      segment_matrix)
from .samplers import (DEFAULT_TIME_FEATURES, SHORT_EVENT_S, FeatureRank,
                       random_regions, rank_features, rule_based_regions,
                       uniform_regions, write_ranking_csv)
from .sessions import (Session, load_dataset, read_biography_json,
                       read_frames_csv, write_biography_json, write_dataset,
                       write_frames_csv)
from .trace import (AnnotationTrace, TimeInterval, normalize_session,
                    read_trace_csv, read_trace_jsonl, resample, write_trace_csv,
                    write_trace_jsonl, zero_baseline)

__version__ = "0.1.0"
