"""Regenerate src/smoothq/data/synthetic_prices.csv.

Daily closes driven by Student-t(3) log returns with GARCH(1,1)-style
volatility clustering, on business days from 2007-01-02.  A handful of
isolated closes (runs of 1 to 3) are blanked to exercise gap filling.
"""
from pathlib import Path

import numpy as np
import pandas as pd

OUT = Path(__file__).resolve().parents[1] / "src" / "smoothq" / "data" / "synthetic_prices.csv"
N = 4500


def main() -> None:
    rng = np.random.default_rng(40_2007)
    dates = pd.bdate_range("2007-01-02", periods=N)
    shocks = rng.standard_t(3, size=N - 1) / np.sqrt(3.0)
    var = np.empty(N - 1)
    ret = np.empty(N - 1)
    v = 1.4e-4
    for t in range(N - 1):
        var[t] = v
        ret[t] = 1e-4 + np.sqrt(v) * shocks[t]
        v = 2e-6 + 0.08 * ret[t] ** 2 + 0.90 * v
    prices = 5500.0 * np.exp(np.concatenate([[0.0], np.cumsum(ret)]))
    closes = [f"{p:.2f}" for p in prices]
    for start, length in [(37, 1), (412, 1), (913, 2), (1500, 1), (2210, 3), (2999, 1),
                          (3333, 1), (3801, 2), (4120, 1), (4402, 1)]:
        for i in range(start, start + length):
            closes[i] = ""
    frame = pd.DataFrame({"date": dates.strftime("%Y-%m-%d"), "close": closes})
    OUT.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(OUT, index=False)
    print(f"wrote {OUT} ({N} rows)")


if __name__ == "__main__":
    main()
