"""A small seeded scan over random coverage functions."""

import json

from corrgap import gap

result = gap.scan("coverage-random(3,4)", count=40, seed=7)
summary = result.to_json()
print(json.dumps({k: summary[k] for k in ("generator", "seed", "bound", "instances_evaluated", "max_ratio", "violations")}, indent=2))
