"""Numeric text rendering shared by the CLI, CSV emitters and golden tests.

Six significant digits via %g; the web console reimplements the same rules
so its displayed values byte-match CLI output.
"""

import math


def sig6(x) -> str:
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return str(x)
    return f"{x:.6g}"
