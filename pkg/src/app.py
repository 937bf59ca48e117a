# app.py
"""
Command-line front end: one job per invocation, JSON in, JSON report out.

    python -m src.app check-andreev dodecahedron.json right-angles.json
    python -m src.app pogorelov-pair --a 0.1 --b 0.1 --c 0.1 --u 0 --v 0.05 --emit-prefix pair

Exit status: 0 when the check passes or the construction succeeds, 1 when
it fails, 2 on usage, schema or configuration errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .core.base import (
    ConfigError,
    Condition,
    GeometryError,
    InvalidInputError,
    QuadricError,
    Report,
    SchemaError,
    Settings,
)
from .core.polyhedron import AbstractPolyhedron, Edge, Face
from .core.utils import as_int, as_list, as_number, dump_json, dumps, load_json, log_message, require
from .managers.andreev import AndreevChecker, AngleAssignment
from .managers.combinatorics import (
    CombinatoricsValidator,
    is_steinitz,
    non_inscribable_stellation,
    poincare_dual,
    stellate,
    stellation_inscribable_necessary,
)
from .managers.hyperbolic import ConvexPolyhedronH3, HalfSpace, PolyhedronBuilder, SphericalPolygon, build_from_halfspaces
from .managers.pogorelov import PogorelovPairBuilder, are_congruent
from .managers.polar import (
    AdmissibilityChecker,
    ConeMetricSurface,
    IdealAdmissibilityChecker,
    expanded_dihedral_angles,
    gauss_image,
    t_expansion,
)

logger = logging.getLogger(__name__)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# Input schemas

def parse_polyhedron(data: Any, location: str = '$') -> AbstractPolyhedron:
    vertices = [as_int(v, f"{location}.vertices[{i}]")
                for i, v in enumerate(as_list(require(data, 'vertices', location), f"{location}.vertices"))]
    edges = []
    for i, e in enumerate(as_list(require(data, 'edges', location), f"{location}.edges")):
        where = f"{location}.edges[{i}]"
        edges.append(Edge(*(as_int(require(e, key, where), f"{where}.{key}") for key in ('id', 'tail', 'head'))))
    faces = []
    for i, f in enumerate(as_list(require(data, 'faces', location), f"{location}.faces")):
        where = f"{location}.faces[{i}]"
        boundary = as_list(require(f, 'boundary', where), f"{where}.boundary")
        faces.append(Face(as_int(require(f, 'id', where), f"{where}.id"),
                          tuple(as_int(s, f"{where}.boundary[{k}]") for k, s in enumerate(boundary))))
    return AbstractPolyhedron(tuple(vertices), tuple(edges), tuple(faces))


def parse_halfspaces(data: Any, location: str = '$') -> List[HalfSpace]:
    halfspaces = []
    for i, entry in enumerate(as_list(data, location)):
        where = f"{location}[{i}]"
        n = [as_number(require(entry, key, where), f"{where}.{key}") for key in ('n0', 'n1', 'n2', 'n3')]
        try:
            halfspaces.append(HalfSpace.of(*n))
        except QuadricError as e:
            raise SchemaError(where, str(e))
    return halfspaces


def parse_angles(data: Any, location: str = '$') -> AngleAssignment:
    if not isinstance(data, dict):
        raise SchemaError(location, "expected an object mapping edge ids to radians")
    angles = {}
    for key, value in data.items():
        try:
            eid = int(key)
        except ValueError:
            raise SchemaError(f"{location}.{key}", "edge id is not an integer")
        angles[eid] = as_number(value, f"{location}.{key}")
    return AngleAssignment(angles)


def parse_cone_metric(data: Any, location: str = '$') -> ConeMetricSurface:
    cells = []
    for i, cell in enumerate(as_list(require(data, 'cells', location), f"{location}.cells")):
        where = f"{location}.cells[{i}]"
        sides = [as_number(x, f"{where}.sides[{k}]")
                 for k, x in enumerate(as_list(require(cell, 'sides', where), f"{where}.sides"))]
        angles = [as_number(x, f"{where}.angles[{k}]")
                  for k, x in enumerate(as_list(require(cell, 'angles', where), f"{where}.angles"))]
        cells.append(SphericalPolygon(tuple(sides), tuple(angles)))
    gluings = []
    for i, g in enumerate(as_list(require(data, 'gluings', location), f"{location}.gluings")):
        where = f"{location}.gluings[{i}]"
        g = [as_int(x, f"{where}[{k}]") for k, x in enumerate(as_list(g, where))]
        if len(g) != 4:
            raise SchemaError(where, "expected [cell, side, cell, side]")
        gluings.append(((g[0], g[1]), (g[2], g[3])))
    point_labels = _parse_point_labels(data.get('cone_points'), f"{location}.cone_points")
    return ConeMetricSurface(tuple(cells), tuple(gluings), point_labels=point_labels)


def _parse_point_labels(labels: Any, location: str) -> Optional[Dict[int, Any]]:
    if labels is None:
        return None
    if not isinstance(labels, dict):
        raise SchemaError(location, "expected an object mapping cone point ids to labels")
    out = {}
    for key, value in labels.items():
        try:
            out[int(key)] = value
        except ValueError:
            raise SchemaError(f"{location}.{key}", "cone point id is not an integer")
    return out


def halfspaces_to_json(P: ConvexPolyhedronH3) -> List[Dict[str, float]]:
    return [dict(zip(('n0', 'n1', 'n2', 'n3'), h.n.coords.tolist())) for h in P.halfspaces]


def _read(path: str, parser: Callable[[Any], Any]) -> Any:
    return parser(load_json(path))


def _construction(name: str, **metrics) -> Report:
    return Report((Condition(name, True),), metrics)


# Commands

Emitted = Dict[str, Any]


def cmd_validate(args, settings) -> Tuple[Report, Emitted]:
    return CombinatoricsValidator(settings).run(_read(args.polyhedron, parse_polyhedron)), {}


def cmd_dual(args, settings):
    dual = poincare_dual(_read(args.polyhedron, parse_polyhedron))
    return _construction('dual', polyhedron=dual.to_dict()), {'dual': dual.to_dict()}


def cmd_steinitz(args, settings):
    P = _read(args.polyhedron, parse_polyhedron)
    passed = is_steinitz(P)
    witness = None if passed else {'reason': '1-skeleton is not a 3-connected planar graph'}
    return Report((Condition('steinitz', passed, witness),), {'V': P.V, 'E': P.E, 'F': P.F}), {}


def cmd_stellate(args, settings):
    S = stellate(_read(args.polyhedron, parse_polyhedron))
    return _construction('stellate', polyhedron=S.to_dict()), {'stellation': S.to_dict()}


def cmd_inscribable_stellation(args, settings):
    P = _read(args.polyhedron, parse_polyhedron)
    possible, reason = stellation_inscribable_necessary(P)
    witness = None if possible else {'reason': reason}
    metrics = {'reason': reason, 'non_inscribable_base': non_inscribable_stellation(P).to_dict()}
    return Report((Condition('inscribable_stellation', possible, witness),), metrics), {}


def cmd_build_h3(args, settings):
    hs = _read(args.halfspaces, parse_halfspaces)
    return PolyhedronBuilder(settings, args.progress).run(hs), {}


def cmd_gauss_image(args, settings):
    P = build_from_halfspaces(_read(args.halfspaces, parse_halfspaces), ideal_tol=settings.ideal_tolerance)
    Q = gauss_image(P)
    return _construction('gauss_image', cone_metric=Q.to_dict()), {'gauss': Q.to_dict()}


def cmd_check_admissible(args, settings):
    Q = _read(args.metric, parse_cone_metric)
    return AdmissibilityChecker(settings, args.progress, args.depth).run(Q), {}


def cmd_check_ideal(args, settings):
    return IdealAdmissibilityChecker(settings).run(_read(args.metric, parse_cone_metric)), {}


def cmd_t_expand(args, settings):
    Q = _read(args.metric, parse_cone_metric)
    Qt = t_expansion(Q, args.t)
    report = _construction('t_expansion', cone_metric=Qt.to_dict(),
                           dihedral_angles=expanded_dihedral_angles(Q, args.t))
    return report, {'expanded': Qt.to_dict()}


def cmd_check_andreev(args, settings):
    P = _read(args.polyhedron, parse_polyhedron)
    a = _read(args.angles, parse_angles)
    return AndreevChecker(settings, args.progress).run(P, a), {}


def cmd_pogorelov_pair(args, settings):
    builder = PogorelovPairBuilder(settings, args.progress)
    report = builder.run(args.a, args.b, args.c, args.u, args.v)
    F, F_prime = builder.pair
    return report, {'F': halfspaces_to_json(F), 'F_prime': halfspaces_to_json(F_prime)}


def cmd_congruent(args, settings):
    P1, P2 = (build_from_halfspaces(_read(path, parse_halfspaces), ideal_tol=settings.ideal_tolerance)
              for path in (args.first, args.second))
    congruent = are_congruent(P1, P2, settings.congruence_tolerance)
    return Report((Condition('congruent', congruent),), {'V': P1.combinatorics.V}), {}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='hyperpolar', description="Hyperbolic polyhedra and their polar metrics.")
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--output', '-o', help="report file (default: stdout)")
    common.add_argument('--emit-prefix', help="write constructed objects to PREFIX_<name>.json")
    common.add_argument('--config', help="dotenv file with HYPERPOLAR_* tolerance overrides")
    common.add_argument('--log-level', default='WARNING', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    common.add_argument('--progress', action='store_true', help="show progress bars on stderr")

    sub = parser.add_subparsers(dest='command', required=True)

    def add(name: str, handler, *positionals: str, help: str):
        p = sub.add_parser(name, parents=[common], help=help)
        for positional in positionals:
            p.add_argument(positional)
        p.set_defaults(handler=handler)
        return p

    add('validate', cmd_validate, 'polyhedron', help="validate an abstract polyhedron")
    add('dual', cmd_dual, 'polyhedron', help="Poincare dual")
    add('steinitz', cmd_steinitz, 'polyhedron', help="3-connected planar 1-skeleton test")
    add('stellate', cmd_stellate, 'polyhedron', help="cone every face over a new vertex")
    add('inscribable-stellation', cmd_inscribable_stellation, 'polyhedron',
        help="necessary condition for an inscribable stellation")
    add('build-h3', cmd_build_h3, 'halfspaces', help="intersect half-spaces of H^3")
    add('gauss-image', cmd_gauss_image, 'halfspaces', help="polar cone metric of a polyhedron")
    add('check-admissible', cmd_check_admissible, 'metric',
        help="admissibility of a cone metric").add_argument('--depth', type=int, default=None)
    add('check-ideal', cmd_check_ideal, 'metric', help="ideal admissibility of a cone metric")
    add('t-expand', cmd_t_expand, 'metric', help="t-expansion of an ideally admissible metric").add_argument(
        '--t', type=float, required=True)
    add('check-andreev', cmd_check_andreev, 'polyhedron', 'angles', help="dihedral angle conditions")
    pair = add('pogorelov-pair', cmd_pogorelov_pair, help="prisms with equal edge lengths")
    for name in ('a', 'b', 'c', 'u', 'v'):
        pair.add_argument(f'--{name}', type=float, required=True)
    add('congruent', cmd_congruent, 'first', 'second', help="congruence of two compact polyhedra")
    return parser


def _options(args: argparse.Namespace, settings: Settings) -> Dict[str, Any]:
    options = {k: v for k, v in vars(args).items() if k not in ('handler', 'log_level', 'progress')}
    options['settings'] = settings.as_dict()
    return options


def _emit(prefix: Optional[str], objects: Emitted) -> None:
    if not prefix:
        return
    for name, data in sorted(objects.items()):
        path = f"{prefix}_{name}.json"
        dump_json(data, path)
        log_message(f"Wrote {path}", "SUCCESS")


def _write(report: Dict[str, Any], output: Optional[str]) -> None:
    if output:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        dump_json(report, output)
    else:
        sys.stdout.write(dumps(report))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS

    logging.basicConfig(level=getattr(logging, args.log_level), format='%(levelname)s %(name)s: %(message)s',
                        stream=sys.stderr, force=True)

    try:
        settings = Settings.from_file(args.config) if args.config else Settings()
    except ConfigError as e:
        log_message(str(e), "ERROR")
        return EXIT_USAGE

    options = _options(args, settings)
    try:
        report, emitted = args.handler(args, settings)
    except SchemaError as e:
        log_message(f"{args.command}: schema error at {e}", "ERROR")
        return EXIT_USAGE
    except InvalidInputError as e:
        log_message(f"{args.command}: invalid input: {e}", "ERROR")
        return EXIT_USAGE
    except GeometryError as e:
        log_message(f"{args.command}: {e}", "ERROR")
        witness = {'error': type(e).__name__, 'message': str(e)}
        if getattr(e, 'witness', None) is not None:
            witness['witness'] = e.witness
        report, emitted = Report((Condition(args.command, False, witness),)), {}

    _emit(args.emit_prefix, emitted)
    data = report.to_dict()
    data['version'] = __version__
    data['options'] = options
    _write(data, args.output)

    log_message(f"{args.command}: {report.verdict}", "SUCCESS" if report.accepted else "WARNING")
    return EXIT_PASS if report.accepted else EXIT_FAIL


if __name__ == '__main__':
    sys.exit(main())
