"""loopexp: exact-rational engine for loop-algebra expansions of canonical forms."""

from .algebra import (AlgebraElement, BUILTIN_NAMES, ContradictoryEntries,
                      IndexOutOfRange, StructureConstants, ValidationReport,
                      algebra_from_dict, algebra_to_dict, bracket, builtin_algebra,
                      jacobi_defect, load_algebra, validate)
from .contraction import (ContractedAlgebra, ContractionDiff, WrongSplitKind,
                          compare_with_expansion, contracted_jacobi_residuals,
                          iw_contract, sector_contract)
from .expansion import (ClosureReport, ClosureViolation, ExpandedAlgebra,
                        ExpandedJacobiReport, ExpandedLabel, InadmissibleLabel,
                        NAMED_CASES, NotClosed, UnknownCase, build_named,
                        check_closure, check_jacobi_expanded, expanded_constant,
                        generator_set)
from .loop import (LoopLabel, ModeWindow, conjugate_label, enumerate_generators,
                   jacobi_residuals, loop_bracket, loop_structure_constant)
from .mcforms import (CoordMonomial, DegreeTooLow, FormPolynomial,
                      GradedFormSeries, GradedSeriesResult, InvalidDegree,
                      McResidualReport, SeriesResult, TwoForm,
                      canonical_form_series, check_grading, exterior_derivative,
                      graded_series_json, rescale_and_collect, resummed,
                      verify_mc_equations, wedge)
from .splitting import (InvalidParams, SplitCheckReport, SplitKind, Splitting,
                        check_subalgebra, check_symmetric_coset, make_splitting)

__version__ = "0.1.0"
