"""
Annotation service round trip
=============================

The HTTP service hosts annotation sessions: each session exposes its
regions, accepts one relative trace per region, and assembles the full
reconstruction once every region is submitted. The annotator frontend
consumes exactly this interface; here a scripted client plays the
annotator's part in-process.
"""

import numpy as np
from fastapi.testclient import TestClient

from ordaffect.interpolate import interpolate
from ordaffect.service import ServiceSession, SessionStore, create_app
from ordaffect.trace import AnnotationTrace, TimeInterval, zero_baseline

# A session with three regions to annotate, 4 Hz, 30 s long.
store = SessionStore()
store.add(ServiceSession(
    session_id="demo",
    sample_rate_hz=4,
    total_len=120,
    condition="prefab_preview",
    regions=[TimeInterval(12, 32), TimeInterval(52, 68), TimeInterval(88, 108)],
    clip_paths=[],
))
client = TestClient(create_app(store))

listing = client.get("/sessions").json()["sessions"][0]
print(f"session {listing['session_id']}: {listing['region_count']} regions, "
      f"condition {listing['condition']}, status {listing['status']}")

regions = client.get("/sessions/demo/regions").json()["regions"]
for r in regions:
    print(f"  region {r['index']}: {r['start_s']:.2f}s .. {r['end_s']:.2f}s "
        f"({r['length_samples']} samples, preview={r['preview']})")

# The annotator holds raise/lower keys while the clip plays; the recorded
# trace is relative and starts at zero. Script three plausible traces.
rng = np.random.default_rng(5)
submitted = []
for r in regions:
    steps = rng.choice([-0.5, 0.0, 0.5], size=r["length_samples"] - 1,
                       p=[0.25, 0.35, 0.4])
    samples = np.concatenate([[0.0], np.cumsum(steps)])
    submitted.append(samples)
    resp = client.post(f"/sessions/demo/regions/{r['index']}/trace",
                       json={"samples": samples.tolist()})
    print(f"  submit region {r['index']}: HTTP {resp.status_code}")

# A wrong-length submission is rejected with the expected/got detail the
# frontend surfaces verbatim.
bad = client.post("/sessions/demo/regions/0/trace", json={"samples": [0.0]})
print(f"resubmission to a filled region: HTTP {bad.status_code}")

done = client.post("/sessions/demo/complete")
print(f"complete: HTTP {done.status_code}, status {done.json()['status']}")

recon = np.asarray(client.get("/sessions/demo/reconstruction").json()["samples"])

# The service's assembly is the library call, bit for bit.
pairs = [(TimeInterval(12, 32), zero_baseline(AnnotationTrace(submitted[0], 4)).values),
         (TimeInterval(52, 68), zero_baseline(AnnotationTrace(submitted[1], 4)).values),
         (TimeInterval(88, 108), zero_baseline(AnnotationTrace(submitted[2], 4)).values)]
direct = interpolate(120, pairs)
print(f"reconstruction: {recon.size} samples, "
      f"bit-exact with the library: {np.array_equal(recon, direct)}")
