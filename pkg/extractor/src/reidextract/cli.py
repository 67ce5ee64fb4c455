"""Command line front end: `reid-extract embed` and `reid-extract detect`."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .config import ExtractorConfig
from .detect import DETECTORS, detect_video
from .errors import ExtractError
from .extract import SPLITS, extract_embeddings
from .features import EMBEDDERS

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg", ".bmp")


def _parse_size(text: str) -> tuple[int, int]:
    try:
        h, w = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise click.BadParameter(f"expected HxW, got {text!r}") from None
    return h, w


@click.group()
def cli():
    """Produce embedding stores, manifests, and detections from raw media."""


@cli.command("embed")
@click.option("--images", "images_dir", required=True,
              type=click.Path(exists=True, file_okay=False),
              help="Directory of crops named <identity>_c<camera>*.png/jpg.")
@click.option("--model", default="hsv-hist", show_default=True,
              type=click.Choice(sorted(EMBEDDERS)))
@click.option("--out", "emb_path", required=True,
              type=click.Path(dir_okay=False), help="Embedding store output.")
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(dir_okay=False), help="Manifest CSV output.")
@click.option("--split", default="gallery", show_default=True,
              type=click.Choice(SPLITS), help="Split recorded on every row.")
@click.option("--input-size", default="256x128", show_default=True,
              help="Resize target as HxW.")
@click.option("--batch-size", default=32, show_default=True, type=int)
def embed_cmd(images_dir, model, emb_path, manifest_path, split, input_size,
              batch_size):
    """Embed every image in a directory, in sorted name order."""
    paths = sorted(
        p for p in Path(images_dir).iterdir()
        if p.suffix.lower() in IMAGE_SUFFIXES
    )
    if not paths:
        raise ExtractError(f"no images under {images_dir}")
    config = ExtractorConfig(model=model, input_size=_parse_size(input_size),
                             batch_size=batch_size)
    report = extract_embeddings(paths, config, emb_path, manifest_path,
                                split=split)
    click.echo(
        f"embedded {report.n_images} images at dim {report.dim} "
        f"-> {report.emb_path}, manifest {report.manifest_path}"
    )


@cli.command("detect")
@click.option("--video", "video_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_jsonl", required=True,
              type=click.Path(dir_okay=False), help="Detections JSONL output.")
@click.option("--emb", "emb_path", type=click.Path(dir_okay=False),
              help="Crop embedding store output [default: --out with .emb].")
@click.option("--model", default="hsv-hist", show_default=True,
              type=click.Choice(sorted(EMBEDDERS)),
              help="Embedder for the detected crops.")
@click.option("--detector", default="contour", show_default=True,
              type=click.Choice(sorted(DETECTORS)))
@click.option("--video-id", default=None,
              help="Video id on every line [default: file stem].")
@click.option("--camera", "camera_id", default=0, show_default=True, type=int)
@click.option("--score-floor", default=0.0, show_default=True, type=float,
              help="Drop raw detections below this score before writing.")
def detect_cmd(video_path, out_jsonl, emb_path, model, detector, video_id,
               camera_id, score_floor):
    """Detect in every frame and embed the detected crops."""
    config = ExtractorConfig(model=model, det_score_floor=score_floor)
    report = detect_video(video_path, config, out_jsonl, emb_path=emb_path,
                          detector=detector, video_id=video_id,
                          camera_id=camera_id)
    emb_note = report.emb_path if report.emb_path else "none (no detections)"
    click.echo(
        f"{report.video_id}: {report.n_detections} detections over "
        f"{report.frame_count} frames -> {report.jsonl_path}, "
        f"embeddings {emb_note}"
    )


def main() -> None:
    try:
        # non-standalone mode hands Exit codes (e.g. --help) back as a value
        code = cli(standalone_mode=False)
        if isinstance(code, int):
            sys.exit(code)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.Abort:
        sys.exit(1)
    except ExtractError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
