#!/usr/bin/env python3
"""Survey the exact local content along the noise-to-extremal line.

For w in {0, 1/10, ..., 1} the box w*PR + (1-w)*uniform is solved by the
exact LP; the survey prints the content together with the CHSH value, so
the kink where nonlocality starts (w = 1/2, CHSH value 2) is visible in
exact arithmetic.
"""

import sys
from fractions import Fraction

from hvlab.bell import chsh, evaluate
from hvlab.boxes import mix
from hvlab.catalog import noise_box, pr_box
from hvlab.decompose import max_local_content
from hvlab.scalar import ONE, Scalar, format_scalar


def main() -> int:
    expression = chsh()
    print(f"{'w':>6}  {'chsh value':>12}  {'local content':>16}  approx")
    for tenths in range(11):
        w = Scalar(Fraction(tenths, 10))
        box = mix([(w, pr_box()), (ONE - w, noise_box())])
        value = evaluate(expression, box)
        content = max_local_content(box).local_content
        print(
            f"{format_scalar(w):>6}  {format_scalar(value):>12}  "
            f"{format_scalar(content):>16}  {content.to_float():.4f}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
