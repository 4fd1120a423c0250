"""Flag densities, averaging/lifting operators and the claim-checking reports."""
from .density import AnchorArityMismatch, anchor_tuples, average, average_of_product, density, evaluate
from .cases import AdjacentPair, CaseAnalysisReport, NotRegular, case_analysis
from .flags import *  # noqa: F401,F403
from .identities import CheckResult, SuiteReport, identity_suite
from .flags import Averaged, Const, Expr, Flag, FlagSum, FlagType, Lifted, Product, lift, type_flag, unlabel

__all__ = [name for name in dir() if not name.startswith("_")]
