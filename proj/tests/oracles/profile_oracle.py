#!/usr/bin/env python3
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Offline oracle for the shipped load profiles.

Independent of the C++ code: re-derives bucket counts, windowed request
rates at tick instants, and the modeled cpu/memory from the affine
resource map. The numbers it prints are frozen into the unit and
acceptance tests.

Usage: profile_oracle.py [profiles_dir]
"""
import math
import os
import sys
from fractions import Fraction

WINDOW_S = 60
INTERVAL_S = 5
CPU_BASE, CPU_PER_RPS = 20.0, 0.25
MEM_BASE, MEM_PER_RPS = 30.0, 0.15


def load(path):
    pts = []
    for line in open(path):
        line = line.strip()
        if not line or line.startswith("#") or line == "time,arrivals":
            continue
        t, r = line.split(",")
        pts.append((Fraction(t), Fraction(r)))
    return pts


def rate_at(pts, t):
    if t <= pts[0][0]:
        return pts[0][1]
    if t >= pts[-1][0]:
        return pts[-1][1]
    for (t0, r0), (t1, r1) in zip(pts, pts[1:]):
        if t0 <= t <= t1:
            return r0 + (r1 - r0) * (t - t0) / (t1 - t0)
    raise AssertionError


def integral(pts, a, b, steps=2000):
    # Composite Simpson in exact rationals; exact for piecewise-linear
    # integrands whose breakpoints land on the grid. Floats here misround
    # buckets whose integral is exactly k + 1/2.
    h = (b - a) / steps
    s = rate_at(pts, a) + rate_at(pts, b)
    for i in range(1, steps):
        s += (4 if i % 2 else 2) * rate_at(pts, a + i * h)
    return s * h / 3


def buckets(pts, duration):
    return [int(math.floor(integral(pts, Fraction(s), Fraction(s + 1), 2) + 0.5)) for s in range(duration)]


def window_count(b, t, cutoff=None):
    lo = max(0, t - WINDOW_S)
    hi = t if cutoff is None else min(t, cutoff)
    return sum(b[lo:hi])


def crossing(pts, level, horizon):
    t = 0.0
    while t <= horizon:
        if rate_at(pts, t) > level:
            return t
        t += 0.001
    return None


def optimization(b, cpu_hi, horizon, mem_hi=80.0, low=60.0):
    # Paired increase/decrease subscriptions with mutual resets; decrease
    # starts latched.
    inc_armed, dec_armed = True, False
    out = []
    for t in range(INTERVAL_S, horizon + 1, INTERVAL_S):
        rate = window_count(b, t) / WINDOW_S
        cpu = min(100.0, CPU_BASE + CPU_PER_RPS * rate)
        mem = min(100.0, MEM_BASE + MEM_PER_RPS * rate)
        if inc_armed and (cpu > cpu_hi or mem > mem_hi):
            out.append((t, "increase"))
            inc_armed, dec_armed = False, True
        elif dec_armed and cpu < low and mem < low:
            out.append((t, "decrease"))
            inc_armed, dec_armed = True, False
    return out


# Values the C++ tests pin. --check recomputes and compares.
FROZEN = {
    "increasingLowIntensity": {"totals": (125, 4950, 24900)},
    "increasingMedIntensity": {"totals": (455, 14280, 64230),
                               "transitions": {75.0: [(145, "increase")], 85.0: [(170, "increase")]}},
    "increasingHighIntensity": {"totals": (667, 68265, 248265), "window_cross": 70, "fire": 80},
}


def main():
    args = [a for a in sys.argv[1:] if a != "--check"]
    check = "--check" in sys.argv[1:]
    root = args[0] if args else os.path.join(os.path.dirname(__file__), "..", "..", "profiles")
    got = {}
    for name in ("increasingLowIntensity", "increasingMedIntensity", "increasingHighIntensity"):
        pts = load(os.path.join(root, name + ".csv"))
        b = buckets(pts, 300)
        print(f"== {name}")
        got[name] = {"totals": (sum(b[:10]), sum(b[:120]), sum(b))}
        print(f"  total requests 0-10s: {sum(b[:10])}  0-120s: {sum(b[:120])}  0-300s: {sum(b)}")
        print(f"  max instantaneous rate: {max(r for _, r in pts)}")
        cross = crossing(pts, 300.0, 300)
        print(f"  instantaneous rate first > 300 at t={cross}")
        max_cpu = max_mem = 0.0
        first_cpu = None
        wcross = None
        for t in range(INTERVAL_S, 301, INTERVAL_S):
            rate = window_count(b, t) / WINDOW_S
            cpu = min(100.0, CPU_BASE + CPU_PER_RPS * rate)
            mem = min(100.0, MEM_BASE + MEM_PER_RPS * rate)
            max_cpu, max_mem = max(max_cpu, cpu), max(max_mem, mem)
            if first_cpu is None and (cpu > 75 or mem > 80):
                first_cpu = t
            if wcross is None and rate > 300:
                wcross = t
        print(f"  windowed rate first > 300 at tick t={wcross}")
        print(f"  modeled max cpu={max_cpu:.4f} max mem={max_mem:.4f}; first increase trigger tick={first_cpu}")
        if name == "increasingMedIntensity":
            for cpu_hi in (75.0, 85.0):
                tr = optimization(b, cpu_hi, 300)
                got[name].setdefault("transitions", {})[cpu_hi] = tr
                print(f"  optimization transitions (cpu_hi={cpu_hi}):", tr)
        if name == "increasingHighIntensity":
            ticks = [(t, window_count(b, t)) for t in range(INTERVAL_S, 121, INTERVAL_S)]
            print("  webui window counts:", ticks)
            run = 0
            fire = None
            for t, c in ticks:
                run = run + 1 if c / WINDOW_S > 300 else 0
                if run == 3:
                    fire = t
                    break
            print(f"  webui fires at t={fire}")
            got[name].update(window_cross=wcross, fire=fire)
            down = [(t, window_count(b, t, cutoff=fire)) for t in range(fire, fire + 16, INTERVAL_S)]
            print("  downstream window counts after cutoff:", down)

    if check:
        bad = [n for n in FROZEN if got.get(n) != FROZEN[n]]
        for n in bad:
            print(f"MISMATCH {n}: oracle {got.get(n)} frozen {FROZEN[n]}")
        return 1 if bad else 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
