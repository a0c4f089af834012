"""Certified witnesses for combinatorial largeness in semigroups.

Classifies sets as syndetic, thick or piecewise syndetic with replayable
certificates, searches Hales-Jewett lines, extracts J-set witnesses and
assembles witness tables for central chains.
"""
from .central import (
    CentralChain,
    CentralConfig,
    CentralWitnessTable,
    SequenceWitness,
    VerificationReport,
    build_commutative_witness,
    build_noncommutative_witness,
    derive_furstenberg,
    derive_phi_form,
    recheck_sequence_witness,
    verify_chain_sums,
)
from .classify import (
    Certificate,
    ClassifierConfig,
    decompose_pws,
    is_piecewise_syndetic,
    is_syndetic,
    is_thick,
    replay,
)
from .errors import (
    CentralSetError,
    DepthTooSmall,
    InfeasibleError,
    InvalidInput,
    PreconditionError,
    SearchExhausted,
    TruncationTooSmall,
    WindowTooSmall,
    WrongAlgorithm,
)
from .hj import (
    Coloring,
    HJCertificate,
    VariableWord,
    find_monochromatic_line,
    find_strong_variable_word,
    hj_certificate_search,
)
from .jset import (
    JSetConfig,
    JWitness,
    NCWitness,
    SequenceFamily,
    check_jwitness,
    check_ncwitness,
    pws_to_jset_commutative,
    pws_to_jset_noncommutative,
)
from .semigroup import GroundSemigroup
from .sets import ExplicitSet, PeriodicSet, WindowSet, WordSet, set_from_json, set_to_json

__version__ = "0.1.0"
