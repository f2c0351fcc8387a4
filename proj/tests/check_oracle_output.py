"""Validates the oracle subcommand's JSON on stdin: the triple
computational-basis measurement must put probability 1/4 on exactly the
four even-parity outcomes."""

import json
import math
import sys

doc = json.load(sys.stdin)
outcomes = {entry["outcome"]: entry["probability"] for entry in doc["outcomes"]}
expected = {"0,0,0", "0,1,1", "1,0,1", "1,1,0"}

if set(outcomes) != expected:
    sys.exit(f"unexpected support: {sorted(outcomes)}")
for outcome, probability in outcomes.items():
    if not math.isclose(probability, 0.25, abs_tol=1e-9):
        sys.exit(f"outcome {outcome}: probability {probability} is not 1/4")
print("oracle table ok")
