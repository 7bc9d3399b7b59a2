"""Command line: ethbath-figures <figid|all> <artifact-dir> [--out DIR]."""

import argparse
import sys

import matplotlib.pyplot as plt

from .render import FIGURE_IDS, ArtifactError, build_spec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ethbath-figures",
        description="regenerate study figures from an ethbath artifact directory",
    )
    parser.add_argument("figure", choices=[*FIGURE_IDS, "all"])
    parser.add_argument("artifact_dir")
    parser.add_argument("--out", default=None, help="output directory (default: artifact dir)")
    args = parser.parse_args(argv)

    ids = FIGURE_IDS if args.figure == "all" else (args.figure,)
    out_dir = args.out or args.artifact_dir
    # validate everything before writing anything: a missing artifact must
    # not leave partial output behind
    specs = []
    try:
        for figure_id in ids:
            spec = build_spec(figure_id, args.artifact_dir)
            spec.validate()
            specs.append(spec)
    except ArtifactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for spec in specs:
        fig, path = render(spec, out_dir)
        plt.close(fig)
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
