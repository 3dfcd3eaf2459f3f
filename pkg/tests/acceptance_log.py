"""Criterion number -> (passed, detail), filled in by test_acceptance."""
RESULTS = {}


def record(num, ok, detail):
    RESULTS[num] = (bool(ok), detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")
    return ok
