"""Transfer-credit decision support from learning-outcome similarity.

Scores two courses' learning outcomes with a taxonomic pass (verb-level
competency clustering over a WordNet verb graph), a semantic pass
(sentence-embedding cosines), and a tunable aggregation pass that yields
a yes/no transfer-credit decision.
"""

from .assessment import (AnnotationRecord, AssessmentConfig, AssessmentResult,
                         Course, CoursePair, CreditDecision, MatchedRow,
                         agreement, assess_pair, decide, final_grid,
                         load_annotations, load_course, load_course_pairs,
                         round_percent, sweep)
from .bloom import (BloomCluster, BloomClusterSet, ClusterAssignment,
                    LearningOutcome, OutcomeReport, VerbAssigner, assign_verb,
                    detect_verbs, load_seed_verbs, lo_level, parse_seed_verbs,
                    silhouette_assign, taxonomic_grid)
from .embeddings import (CachedFileProvider, CachingProvider,
                         DeterministicProvider, EmbeddingCache, EmbeddingVector,
                         RemoteProvider, cosine, semantic_grid)
from .grids import SimilarityGrid
from .verbsim import (KNOWLEDGE_MEASURES, MeasureReport, MeasureScore,
                      VerbPairRecord, WordVectorTable, evaluate_measures,
                      load_verb_pairs, pearson, sim_lch, sim_path, sim_wup,
                      verb_sim)
from .wordnet import (VIRTUAL_ROOT, Synset, SynsetId, VerbTaxonomy,
                      load_wordnet, parse_wordnet, write_wordnet)

__version__ = "0.1.0"
