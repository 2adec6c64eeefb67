"""Break-resilient codes for fingerprints embedded in printed objects."""

from .channel import BreakPlan, apply_channel, greedy_adversary, random_adversary, realized_losses
from .codec import DecodeError, DecodeReport, Fragment, decode, decode_report, encode, preprocess
from .embed import EmbedParams, ParseFailure, apply_imperfection, embed_bits, interval_disjoint, parse_bits
from .gf import Field, field_new
from .params import (
    BrcParams, ParameterError, budget_ok, code_rate, cpc_rate_bound, derive_params,
    min_dimension, search_params,
)
from .rs import ReedSolomonError, RsCode, rs_decode, rs_encode

__version__ = "0.1.0"
