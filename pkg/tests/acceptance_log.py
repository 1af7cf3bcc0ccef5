"""Collects one verdict line per acceptance criterion."""
RESULTS = {}


def record(n: int, ok: bool, detail: str):
    RESULTS[n] = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    print(RESULTS[n])
