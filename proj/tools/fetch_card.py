"""Writes data/card.csv from the `wooldridge` package (Card 1995 extract)."""

import argparse
import pathlib

import wooldridge

COLUMNS = ["lwage", "educ", "nearc2", "nearc4", "exper", "expersq", "black", "south", "smsa",
           "reg661", "reg662", "reg663", "reg664", "reg665", "reg666", "reg667",
           "reg668", "smsa66"]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    default = pathlib.Path(__file__).resolve().parent.parent / "data" / "card.csv"
    parser.add_argument("--out", type=pathlib.Path, default=default)
    args = parser.parse_args()
    frame = wooldridge.data("card")[COLUMNS]
    args.out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(args.out, index=False)
    print(f"wrote {len(frame)} rows to {args.out}")


if __name__ == "__main__":
    main()
