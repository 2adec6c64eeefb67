"""Ground-truth decode harness shared by codec, channel and acceptance tests."""

from fractions import Fraction

from brcodes.channel import apply_channel
from brcodes.codec import decode_report, encode_trace
from brcodes.constrained import ceil_log2


def check_plan(params, w, plan, trace=None):
    """Run one plan end to end and check the decoder's bookkeeping.

    Returns ``(ok, report, channel_output)``.  Links the decoder read off
    fragments must agree with the true map, and the number of lost parity
    symbols must stay within four per break plus four per
    ``5m + ceil(log m) + 15`` lost bits.
    """
    trace = trace or encode_trace(w, params)
    out = apply_channel(trace.codeword, plan, params)
    rep = decode_report(out.fragments, params)
    for key, val in rep.links.items():
        assert int(trace.next_map[key]) == val, f"wrong link {key}->{val}"
    unit = 5 * params.m + ceil_log2(params.m) + 15
    if rep.mu_codewords:
        assert rep.redundancy_erasures <= 4 * (out.t + Fraction(out.s, unit))
    return rep.word == w, rep, out
