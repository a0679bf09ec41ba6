"""mailtriage: helpdesk email triage toolkit.

Keyword-rule labeling of helpdesk queries, a from-scratch bag-of-words
feed-forward classifier and a keyword-vector decision-tree baseline (with
stratified synonym-replacement augmentation), evaluation reports, and
confidence-gated tailored auto-replies, exposed through a CLI and an HTTP
service.
"""

__version__ = "0.1.0"

from .augment import AugmentConfig, SynonymLexicon, TokenizedSample  # noqa: F401
from .corpus import CleanEmail, RawEmail, clean, filter_incoming, ingest  # noqa: F401
from .labeling import (  # noqa: F401
    DEFAULT_CATEGORIES,
    CategorySpec,
    LabeledEmail,
    build_labeled_corpus,
    match_category,
)
from .models import (  # noqa: F401
    MlpModel,
    TrainConfig,
    TreeModel,
    load_model,
    predict,
    predict_proba,
    save_model,
    train_mlp,
    train_tree,
    tree_predict,
)
from .textprep import lemmatize, preprocess, remove_stopwords, tokenize  # noqa: F401
