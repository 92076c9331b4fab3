"""Transcribe reference tables from a LaTeX source into the shipped JSON data files.

    python tools/extract_tables.py SOURCE.tex

Writes cluster_table_E6.json / cluster_table_E7.json (three-column longtables of
cluster variable, dominant monomial, Verlinde image) and example_A2.json /
example_B3.json (the decomposition arrays of the two worked examples).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import re
from pathlib import Path

from clusterfusion.cartan import build_cartan
from clusterfusion.weyl import enumerate_Pk_plus

DATA = Path(__file__).resolve().parents[1] / "src" / "clusterfusion" / "data"

# the two stated final images, copied as LaTeX
STATED = {
    "A2": r"[L(3 \La_{0} + 3 \La_{1})] + [L(6 \La_{2})] + 2[L(4 \La_{0} + \La_{1} + \La_{2})]"
          r" + 2[L(\La_{0} + 4 \La_{1} + \La_{2})] + 3[L(2 \La_{0} + 2 \La_{1} + 2 \La_{2})]"
          r" + [L(3 \La_{0} + 3 \La_{2})] + [L(3 \La_{1} + 3 \La_{2})] + 2[L(\La_{0} + \La_{1} + 4 \La_{2})]",
    "B3": r"[L(2\La_0 + \La_3)] + [L(3\La_3)] + [L(\La_2 + \La_3)] + [L(\La_0 + \La_1 + \La_3)]",
}
EXAMPLES = {"A2": (6, 700, "Y_{1,-1}Y_{1,-3}Y_{1,-9}Y_{1,-11}Y_{2,-4}Y_{2,-6}^2Y_{2,-8}"),
            "B3": (3, 47880, "Y_{1,0}Y_{1,4}Y_{2,-6}Y_{3,-3}Y_{3,-1}Y_{3,1}")}


def _digest(body) -> str:
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def _combination(text: str, symbol: str, n: int, affine: bool) -> list[int]:
    """'4 \\poid_1 + \\poid_3' -> coordinate list."""
    out = [0] * (n + 1 if affine else n)
    for coeff, idx in re.findall(r"(\d*)\s*\\" + symbol + r"_\{?(\d+)\}?", text):
        pos = int(idx) if affine else int(idx) - 1
        out[pos] += int(coeff or 1)
    return out


def _affine_sum(text: str, n: int) -> list[tuple[int, list[int]]]:
    terms = []
    for sign, coeff, body in re.findall(r"([+-]?)\s*(\d*)\s*\[?L\(([^)]*)\)\]?", text):
        c = int(coeff or 1) * (-1 if sign == "-" else 1)
        terms.append((c, _combination(body, "La", n, affine=True)))
    return terms


def longtables(tex: str) -> dict[str, dict]:
    out = {}
    for body in re.findall(r"\\begin\{longtable\}(.*?)\\end\{longtable\}", tex, re.S):
        m = re.search(r"type \$([A-G])_(\d)\$", body)
        if not m:
            continue
        label = m.group(1) + m.group(2)
        rows = []
        for idx, mono, image in re.findall(r"\$x_\{(\d+)\}\$ & \$(.*?)\$ & \$(.*?)\$", body):
            rows.append({"index": int(idx), "monomial": mono.replace(" ", ""),
                         "image": re.sub(r"\s+", " ", image).strip()})
        datum = build_cartan(label)
        basis = [list(w) for w in enumerate_Pk_plus(datum, 2)]
        body_json = {"type": label, "k": 2, "basis": basis, "rows": rows}
        out[label] = {"provenance": "transcribed reference table", "sha256": _digest(body_json), **body_json}
    return out


def example_arrays(tex: str) -> dict[str, dict]:
    out = {}
    arrays = re.findall(r"\\begin\{array\}\{\|c\|c\|c\|c\|c\|\}(.*?)\\end\{array\}", tex, re.S)
    for label, body in zip(("A2", "B3"), arrays):
        n = build_cartan(label).rank
        k, total, mono = EXAMPLES[label]
        rows = []
        for line in body.split("\\\\"):
            cells = [c.strip() for c in line.replace("\\hline", "").split("&")]
            if len(cells) != 5 or not cells[0].isdigit():
                continue
            mult, summand, dimv, image, qd = cells
            if image.strip() == "0":
                img = {"sign": 0, "weight": None}
            else:
                ((c, w),) = _affine_sum(image, n)
                img = {"sign": c, "weight": w}
            rows.append({"multiplicity": int(mult), "weight": _combination(summand, "poid", n, affine=False),
                         "dim": int(dimv), "image": img, "qdim": float(qd.rstrip(".").rstrip(".") or 0)})
        stated = {json.dumps(w): c for c, w in _affine_sum(STATED[label], n)}
        body_json = {"type": label, "k": k, "monomial": mono, "total_dim": total, "rows": rows,
                     "stated_image": [[json.loads(w), c] for w, c in stated.items()]}
        out[label] = {"provenance": "transcribed worked example", "sha256": _digest(body_json), **body_json}
    return out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("source")
    args = ap.parse_args(argv)
    tex = Path(args.source).read_text()
    for label, data in longtables(tex).items():
        (DATA / f"cluster_table_{label}.json").write_text(json.dumps(data, indent=1) + "\n")
        print("wrote table", label, len(data["rows"]), "rows")
    for label, data in example_arrays(tex).items():
        (DATA / f"example_{label}.json").write_text(json.dumps(data, indent=1) + "\n")
        print("wrote example", label, len(data["rows"]), "rows")


if __name__ == "__main__":
    main()
