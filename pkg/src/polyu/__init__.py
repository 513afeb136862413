"""Universal mixed sums of generalized squares and octagonal numbers."""

from .escalation import Catalogue, ClassificationRun, classify, escalate, full_catalogue
from .forms import (
    TernaryForm,
    good_partition,
    pme_check,
    pme_conclusion_check,
    prec_check,
    rep_count,
    short_vectors,
    siegel_identity_check,
    theta_series,
    transformation_set,
)
from .polysum import (
    CRITICAL_INTEGERS,
    IndeterminateError,
    MixedSum,
    TruantReport,
    Verdict,
    criterion_universal,
    exceptional_set,
    find_witness,
    is_represented,
    polygonal_value,
    reduction_check,
    reduction_plan,
    truant,
)
from .tables import PaperFixture, fixture

__all__ = [
    "CRITICAL_INTEGERS", "Catalogue", "ClassificationRun", "IndeterminateError",
    "MixedSum", "PaperFixture", "TernaryForm", "TruantReport", "Verdict",
    "classify", "criterion_universal", "escalate", "exceptional_set", "find_witness",
    "fixture", "full_catalogue", "good_partition", "is_represented", "pme_check",
    "pme_conclusion_check", "polygonal_value", "prec_check", "reduction_check",
    "reduction_plan", "rep_count", "short_vectors", "siegel_identity_check",
    "theta_series", "transformation_set", "truant",
]
