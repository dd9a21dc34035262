"""Testing preorders for finite sequential CCS.

The library decides the classical must testing preorder and two
interface-indexed multiparty variants: the uncoordinated preorder, which
compares must-sets over commutation classes of traces, and the
individualistic preorder, which compares them over projection-filtered
classes.  Failed checks come with a minimal witness and a synthesized
distinguishing observer validated by an exhaustive execution oracle.
"""

from .parsing import (
    DefinitionFile,
    ParseError,
    load_definitions,
    parse_configuration,
    parse_definitions,
    parse_interface,
    parse_process,
    parse_term,
)
from .preorders import (
    CheckResult,
    IND,
    MUST,
    RELATIONS,
    SynthesisError,
    UNC,
    Witness,
    all_witnesses,
    check,
    leq_ind,
    leq_must,
    leq_unc,
    relate,
    synthesize_observer,
    validate_observer,
)
from .semantics import (
    HiddenView,
    converges,
    hide,
    initials,
    must_holds,
    must_pass,
    reachable_graph,
    step,
    tau_closure,
    traces,
    visible_traces,
    weak_after,
)
from .terms import (
    Action,
    BudgetExceededError,
    Choice,
    Configuration,
    MtpError,
    NIL,
    Nil,
    NotFiniteError,
    ONE,
    One,
    Prefix,
    Rec,
    TAU,
    TICK,
    Var,
    config,
    names,
    unparse,
)
from .traceclasses import (
    Interface,
    InterfaceError,
    TraceClass,
    UncoveredNameError,
    filtered_class,
    interface_of_names,
    is_refinement,
    maz_class,
    project,
    singleton_class,
    validate_interface,
)
from .corpus import Corpus, CorpusEntry, load_corpus, run_corpus

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
