"""spanchor: span-preserving translation of extractive-QA corpora.

The toolkit anchors answer spans with delimiters so they survive machine
translation, segments over-long contexts at sentence boundaries, tracks
discards, and ships the surrounding evaluation machinery: EM/F1 scoring,
sample sizing, preference tallies, Krippendorff's alpha, and a blinded
pairwise annotation service.
"""

from .anchoring import (
    AnchorError,
    clean_text,
    enclose_answer,
    finalize_markers,
    postprocess_dashes,
    seek_answer,
)
from .backends import (
    Backend,
    BackendConfig,
    BackendError,
    DirectoryCache,
    MemoryCache,
    cached,
    make_backend,
    translate_batch,
)
from .corpus import (
    AnswerSpan,
    Article,
    Corpus,
    Paragraph,
    QaRecord,
    SplitStats,
    ValidationReport,
    check_spans,
    parse_corpus,
    summarize,
    write_corpus,
)
from .metrics import (
    ENGLISH_PROFILE,
    URDU_PROFILE,
    EvalReport,
    NormalizationProfile,
    evaluate_predictions,
    exact_match,
    normalize_answer,
    token_f1,
)
from .pipeline import (
    DiscardRecord,
    PipelineConfig,
    PipelineItem,
    PipelineReport,
    TranslatedQa,
    build_item,
    project_qa,
    run_pipeline,
)
from .sampling import (
    AgreementReport,
    RatingMatrix,
    SampleSpec,
    Vote,
    draw_sample,
    krippendorff_nominal,
    preference_summary,
    required_sample_size,
)
from .segmenter import (
    Segment,
    SentenceSpan,
    reassemble,
    segment_paragraph,
    split_sentences,
)

__version__ = "0.1.0"
