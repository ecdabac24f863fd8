"""End-to-end certification at q = 4 and the reproducible certificate hash.

The certificate ties everything together: both tables agree entry by
entry under the identity map on pair indices, and every structural block
(covering, axioms, eigen data, fusion, orbit) passes.  Reruns produce the
same canonical hash.
"""

import json

from hxpw import certify
from hxpw.certify import canonical_hash

cert = certify(2)
print("verdict:", cert["verdict"])
print("header:", json.dumps(cert["header"], sort_keys=True))

for name, block in cert["blocks"].items():
    status = "skipped" if "skipped" in block else ("pass" if block.get("pass") else "FAIL")
    print(f"  {name:16s} {status}")

print("\nunordered pair counts per class:",
      cert["blocks"]["class_counts"]["unordered_pairs"]["hx"])
print("canonical hash:", cert["canonical_sha256"])
print("rerun reproduces it:", canonical_hash(certify(2)) == cert["canonical_sha256"])
