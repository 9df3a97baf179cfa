from __future__ import annotations

from fibra import corpus
from fibra.bounds import max_curve_genus, parity_threshold_pg
from fibra.construction_file import load_construction
from fibra.engine import VerificationEngine, sibling_resolver
from fibra.report import render_text


def main() -> None:
    engine = VerificationEngine(resolver=sibling_resolver())

    surface = engine.verify(load_construction(corpus.corpus_path("x_s_19")))
    print(render_text(surface))

    variant = engine.verify(load_construction(corpus.corpus_path("x_c_13")))
    print(render_text(variant))

    print("max g(C) at p_g = 183:", max_curve_genus(183))
    print("K.N^2 = 0 from p_g =", parity_threshold_pg() + 1)


if __name__ == "__main__":
    main()
