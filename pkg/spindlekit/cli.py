#!/usr/bin/env python3
"""
spindlekit command line
Decide spherical support and exterior sphere conditions of finite point sets, build the
certificate regions and write JSON reports / SVG scenes.
Usage: python -m spindlekit.cli <command> [options] INPUT
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .config import Settings, load_settings
from .errors import (
    EXIT_FAILS,
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_USAGE,
    DimensionMismatchError,
    InputError,
    PreconditionError,
    SpindleError,
    UsageError,
    exit_code_for,
)
from .formats.documents import InputDocument, build_report, parse_input, serialize_report
from .formats.render import Scene, render_svg
from .geometry.core import PointSet, Tolerance, diameter
from .geometry.normals import CertificateKind
from .geometry.regions import (
    ball_hull_membership,
    ball_intersection_2d,
    region_farthest_distance,
)
from .properties.deciders import (
    check_exterior_infty,
    check_exterior_sphere,
    check_spherically_supported,
    threshold_scan,
)
from .properties.oracles import cross_validate, exact_direction_set, grid_verdict_mismatches
from .properties.reports import PropertyReport, Verdict
from .properties.theorems import (
    certify_thm31,
    certify_thm32,
    check_prop31,
    check_thm33_shape,
)


logger = logging.getLogger('spindlekit')

PROPERTIES = ('spherical-support', 'exterior-sphere', 'exterior-infty')

KIND_FOR = {
    'spherical-support': CertificateKind.FAR_REALIZED,
    'exterior-sphere': CertificateKind.REALIZED,
    'exterior-infty': CertificateKind.SUPPORTING,
}

# above this multiple of the diameter a set is treated as not spherically supported
SCAN_CEILING = 1e3

USAGE_EXAMPLES = """
Examples:
  python -m spindlekit.cli check --property spherical-support -r 1 samples/circle12.json
  python -m spindlekit.cli certify -r 1.4142135623730951 --svg square.svg samples/square.json
  python -m spindlekit.cli prop31 -r 1 --big-radii 1,2 samples/twopoints.json
  python -m spindlekit.cli scan samples/square.json
  python -m spindlekit.cli check samples/lens.json
"""


class SpindleRunner:
    """Runs one subcommand on a parsed input document.

    Every command returns ``{'success': bool, 'exit_code': int, 'report': dict}`` plus an
    optional ``scene`` for SVG output.
    """

    def __init__(self, settings: Settings, args: argparse.Namespace):
        self.settings = settings
        self.args = args
        self.timings: Dict[str, float] = {}

    def _tolerance(self, S: PointSet) -> Tolerance:
        return Tolerance.for_set(S, self.settings.abs_eps, self.settings.ang_eps)

    def _points(self, doc: InputDocument) -> PointSet:
        if doc.point_set is None:
            raise InputError(f"'{self.args.command}' needs a 'points' list", path=".points")
        return doc.point_set

    def _radius(self, required: bool = True) -> Optional[float]:
        r = self.args.radius
        if r is None and required:
            raise UsageError(f"'{self.args.command}' with property '{self.args.property}' needs --radius")
        if r is not None and not r > 0:
            raise UsageError(f"--radius must be positive, got {r}")
        return r

    def _report(self, doc: InputDocument, tol: Optional[Tolerance], **parts: Any) -> Dict[str, Any]:
        timings = None
        if self.args.timings:
            timings = dict(self.timings)
            for i, rep in enumerate(parts.get('reports', ())):
                timings[f'report_{i}_ms'] = rep.timing_ms
        return build_report(self.args.command, self.settings.seed, tol, doc, timings=timings, **parts)

    def _decide(self, S: PointSet, tol: Tolerance, prop: str) -> PropertyReport:
        threads = self.settings.threads
        if prop == 'spherical-support':
            return check_spherically_supported(S, self._radius(), tol, threads)
        if prop == 'exterior-sphere':
            return check_exterior_sphere(S, self._radius(), tol, self.settings.samples,
                                         self.settings.seed, threads)
        return check_exterior_infty(S, tol, threads)

    def _direction_scene(self, S: PointSet, tol: Tolerance, prop: str, **extra: Any) -> Optional[Scene]:
        if S.dim != 2:
            return None
        r = None if prop == 'exterior-infty' else self._radius()
        sets = [(pos, exact_direction_set(S, s, r, KIND_FOR[prop], tol)) for pos, s in enumerate(S.coords)]
        return Scene(S, sets, title=f"{prop}" + ("" if r is None else f", r = {r:g}"), **extra)

    def _oracle(self, S: PointSet, tol: Tolerance, prop: str,
                report: PropertyReport) -> Dict[str, Any]:
        """Grid cross-check of a decider report; sets 'agrees' False on real disagreement."""
        r = None if prop == 'exterior-infty' else self._radius()
        kind = KIND_FOR[prop]
        samples, seed = self.settings.samples, self.settings.seed
        out: Dict[str, Any] = {'samples': samples, 'seed': seed}
        mismatches = grid_verdict_mismatches(S, [w.accepted for w in report.witnesses], r, kind,
                                             samples, seed, tol)
        out['grid_verdict_mismatches'] = mismatches
        agrees = not mismatches
        if S.dim == 2:
            agreement = cross_validate(S, r, kind, samples, seed, tol)
            out['cross_validation'] = agreement.to_dict()
            agrees = agrees and agreement.agrees
            if agreement.near_endpoint_fraction >= 0.01:
                logger.warning("%.2f%% of probes differ near arc endpoints",
                               100.0 * agreement.near_endpoint_fraction)
        out['agrees'] = agrees
        return out

    def check(self, doc: InputDocument) -> Dict[str, Any]:
        """Decide one property, or run the shape check on a 'shape' document."""
        if doc.point_set is None:
            return self._check_shape(doc)
        S = doc.point_set
        tol = self._tolerance(S)
        prop = self.args.property
        report = self._decide(S, tol, prop)
        results = {}
        exit_code = EXIT_OK if report.holds else EXIT_FAILS
        if self.args.oracle:
            results['oracle'] = self._oracle(S, tol, prop, report)
            if not results['oracle']['agrees']:
                logger.error("exact and grid verdicts disagree beyond the endpoint window")
                exit_code = EXIT_INTERNAL
        scene = self._direction_scene(S, tol, prop) if self.args.svg else None
        return {
            'success': exit_code == EXIT_OK,
            'exit_code': exit_code,
            'report': self._report(doc, tol, reports=[report], results=results),
            'scene': scene,
        }

    def _check_shape(self, doc: InputDocument) -> Dict[str, Any]:
        shape = doc.shape
        r = self.args.radius or shape.radius
        tol = Tolerance(self.settings.abs_eps, max(1.0, 2.0 * r), self.settings.ang_eps)
        report = check_thm33_shape(shape.centers, r, self.settings.shape_samples, tol)
        scene = None
        if self.args.svg:
            centers = PointSet.from_points(shape.centers)
            scene = Scene(centers, region=ball_intersection_2d(centers, r, tol),
                          title=f"strong convexity, r = {r:g}")
        return {
            'success': report.holds,
            'exit_code': EXIT_OK if report.holds else EXIT_FAILS,
            'report': self._report(doc, tol, reports=[report]),
            'scene': scene,
        }

    def certify(self, doc: InputDocument) -> Dict[str, Any]:
        """Build and verify the supporting half-spaces or the far-certificate region."""
        S = self._points(doc)
        tol = self._tolerance(S)
        prop = self.args.property
        if prop == 'exterior-sphere':
            raise UsageError("certify supports --property spherical-support or exterior-infty")
        try:
            if prop == 'exterior-infty':
                bundle = certify_thm31(S, tol, self.settings.threads)
            else:
                bundle = certify_thm32(S, self._radius(), tol, self.settings.threads)
        except PreconditionError as e:
            logger.warning("%s", e)
            report = self._decide(S, tol, prop)
            return {
                'success': False,
                'exit_code': EXIT_FAILS,
                'report': self._report(doc, tol, reports=[report],
                                       results={'precondition': str(e), 'point': e.point_index}),
            }
        if not bundle.verified:
            logger.error("certificate verification failed, worst residual %.3e", bundle.worst_residual)
        scene = None
        if self.args.svg and S.dim == 2:
            if prop == 'exterior-infty':
                scene = self._direction_scene(S, tol, prop)
            else:
                scene = Scene(S, region=bundle.region, certificates=bundle.certificates,
                              title=f"certificate region, r = {bundle.radius:g}")
        return {
            'success': bundle.verified,
            'exit_code': EXIT_OK if bundle.verified else EXIT_INTERNAL,
            'report': self._report(doc, tol, bundles=[bundle]),
            'scene': scene,
        }

    def hull(self, doc: InputDocument) -> Dict[str, Any]:
        """Classify query points against the r-ball hull of the set (or of a shape's generators)."""
        if doc.point_set is None:
            S = PointSet.from_points(doc.shape.centers)
            r = self.args.radius or doc.shape.radius
        else:
            S = doc.point_set
            r = self._radius()
        tol = self._tolerance(S)
        queries = list(doc.queries) + list(self.args.query or [])
        if not queries:
            queries = list(S.coords)
        region = ball_intersection_2d(S, r, tol)
        if region.empty_flag:
            logger.warning("no closed ball of radius %g contains the set", r)
            return {
                'success': False,
                'exit_code': EXIT_FAILS,
                'report': self._report(doc, tol, results={'radius': r, 'enclosing_ball': False}),
            }
        rows = []
        for q in queries:
            rows.append({'point': list(q), 'containment': ball_hull_membership(S, r, q, tol),
                         'farthest_distance': region_farthest_distance(region, q)})
        scene = Scene(S, region=region, title=f"ball intersection, r = {r:g}") if self.args.svg else None
        return {
            'success': True,
            'exit_code': EXIT_OK,
            'report': self._report(doc, tol, results={'radius': r, 'enclosing_ball': True,
                                                       'ball_intersection': region.to_dict(),
                                                       'queries': rows}),
            'scene': scene,
        }

    def prop31(self, doc: InputDocument) -> Dict[str, Any]:
        """Residuals of the equivalent inequalities over the big radii."""
        S = self._points(doc)
        tol = self._tolerance(S)
        r = self._radius()
        try:
            result = check_prop31(S, r, self.args.big_radii, tol, self.settings.threads)
        except PreconditionError as e:
            logger.warning("%s", e)
            report = check_spherically_supported(S, r, tol, self.settings.threads)
            return {
                'success': False,
                'exit_code': EXIT_FAILS,
                'report': self._report(doc, tol, reports=[report],
                                       results={'precondition': str(e), 'point': e.point_index}),
            }
        self.timings['prop31_ms'] = result.timing_ms
        return {
            'success': result.holds,
            'exit_code': EXIT_OK if result.holds else EXIT_FAILS,
            'report': self._report(doc, tol, results={'prop31': result.to_dict()}),
        }

    def scan(self, doc: InputDocument) -> Dict[str, Any]:
        """Bisect the smallest radius at which the set is spherically supported."""
        S = self._points(doc)
        tol = self._tolerance(S)
        diam = diameter(S)
        r_lo = self.args.r_lo if self.args.r_lo is not None else max(0.5 * diam, self.settings.abs_eps)
        r_hi = self.args.r_hi if self.args.r_hi is not None else SCAN_CEILING * max(diam, 1.0)
        if not 0 < r_lo < r_hi:
            raise UsageError(f"need 0 < --r-lo < --r-hi, got {r_lo} and {r_hi}")
        start = time.perf_counter()
        threshold = threshold_scan(S, r_lo, r_hi, self.settings.scan_steps, tol)
        self.timings['scan_ms'] = (time.perf_counter() - start) * 1000.0
        results = {'threshold': threshold, 'r_lo': r_lo, 'r_hi': r_hi, 'steps': self.settings.scan_steps}
        reports = []
        if threshold is not None:
            reports.append(check_spherically_supported(S, threshold, tol, self.settings.threads))
        return {
            'success': threshold is not None,
            'exit_code': EXIT_OK if threshold is not None else EXIT_FAILS,
            'report': self._report(doc, tol, reports=reports, results=results),
        }

    def render(self, doc: InputDocument) -> Dict[str, Any]:
        """Draw the direction sets, plus the certificate region when it exists."""
        if not self.args.svg:
            raise UsageError("render needs --svg PATH")
        if doc.point_set is None:
            return self._check_shape(doc)
        S = doc.point_set
        tol = self._tolerance(S)
        if S.dim != 2:
            raise DimensionMismatchError(2, S.dim)
        prop = self.args.property
        report = self._decide(S, tol, prop)
        bundles, extra = [], {}
        if prop == 'spherical-support' and report.verdict is Verdict.HOLDS:
            bundle = certify_thm32(S, self._radius(), tol, self.settings.threads)
            bundles.append(bundle)
            extra = {'region': bundle.region, 'certificates': bundle.certificates}
        return {
            'success': True,
            'exit_code': EXIT_OK,
            'report': self._report(doc, tol, reports=[report], bundles=bundles,
                                   results={'svg': str(self.args.svg)}),
            'scene': self._direction_scene(S, tol, prop, **extra),
        }


def _big_radii(text: str) -> List[float]:
    try:
        values = [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")
    if not values or any(not v > 0 for v in values):
        raise argparse.ArgumentTypeError("big radii must be positive")
    return values


def _query(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated coordinates, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('input', help="JSON, CSV or YAML document ('-' for standard input)")
    common.add_argument('-r', '--radius', type=float)
    common.add_argument('--property', choices=PROPERTIES, default='spherical-support')
    common.add_argument('--samples', type=int, help="oracle grid size (default 360)")
    common.add_argument('--seed', type=int, help="oracle seed (default 0)")
    common.add_argument('--tol', type=float, help="absolute tolerance (default 1e-9)")
    common.add_argument('--threads', type=int)
    common.add_argument('--report', type=Path, help="write the JSON report here instead of stdout")
    common.add_argument('--svg', type=Path)
    common.add_argument('--oracle', action='store_true', help="cross-check against the direction grid")
    common.add_argument('--timings', action='store_true', help="include the timings block")
    common.add_argument('-v', '--verbose', action='count', default=0)

    parser = argparse.ArgumentParser(
        prog='spindlekit', description=__doc__.strip().splitlines()[1],
        epilog=USAGE_EXAMPLES, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest='command', required=True)
    check = sub.add_parser('check', parents=[common], help="decide a property")
    check.add_argument('--shape-samples', type=int, help="boundary samples for shape documents")
    sub.add_parser('certify', parents=[common], help="build and verify a certificate bundle")
    hull = sub.add_parser('hull', parents=[common], help="classify points against the r-ball hull")
    hull.add_argument('--query', type=_query, action='append', help="x1,x2 (repeatable)")
    prop31 = sub.add_parser('prop31', parents=[common], help="equivalent-inequality residuals")
    prop31.add_argument('--big-radii', type=_big_radii)
    scan = sub.add_parser('scan', parents=[common], help="bisect the threshold radius")
    scan.add_argument('--r-lo', type=float)
    scan.add_argument('--r-hi', type=float)
    scan.add_argument('--steps', type=int)
    render = sub.add_parser('render', parents=[common], help="write an SVG scene")
    render.add_argument('--shape-samples', type=int)
    return parser


_HANDLER_NAME = 'spindlekit-stderr'


def configure_logging(level: str) -> None:
    """Route spindlekit logs to standard error as '[LEVEL] message'."""
    for handler in list(logger.handlers):
        if handler.get_name() == _HANDLER_NAME:
            logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(_HANDLER_NAME)
    handler.setFormatter(logging.Formatter('[%(levelname)s] %(message)s'))
    logger.addHandler(handler)
    logger.setLevel(level)


def _settings_for(args: argparse.Namespace) -> Settings:
    level = {0: None, 1: 'INFO'}.get(args.verbose, 'DEBUG')
    return load_settings().replace(
        threads=args.threads,
        abs_eps=args.tol,
        samples=args.samples,
        seed=args.seed,
        log_level=level,
        scan_steps=getattr(args, 'steps', None),
        shape_samples=getattr(args, 'shape_samples', None),
    )


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        from dotenv import load_dotenv
        load_dotenv()
    except ImportError:
        pass

    configure_logging('WARNING')
    try:
        settings = _settings_for(args)
        configure_logging(settings.log_level)
        doc = parse_input(sys.stdin if args.input == '-' else args.input)
        runner = SpindleRunner(settings, args)
        start = time.perf_counter()
        result = getattr(runner, args.command)(doc)
        if args.timings:
            result['report'].setdefault('timings', {})['total_ms'] = (time.perf_counter() - start) * 1000.0

        text = serialize_report(result['report'])
        if args.report:
            args.report.write_text(text)
            logger.info("report written to %s", args.report)
        else:
            sys.stdout.write(text)
        scene = result.get('scene')
        if args.svg and scene is not None:
            render_svg(scene, args.svg)
        elif args.svg:
            logger.warning("nothing to draw for '%s' on this input", args.command)
        return result['exit_code']
    except SpindleError as e:
        logger.error("%s", e)
        return exit_code_for(e)
    except Exception as e:
        logger.exception("internal error: %s", e)
        return EXIT_INTERNAL


def main():
    """CLI interface"""
    sys.exit(run_command())


if __name__ == '__main__':
    main()
