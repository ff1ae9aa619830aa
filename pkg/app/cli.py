"""Command-line entry point for the lab."""

import argparse
import logging
import os
import sys
from collections.abc import Callable

from app import __version__
from app.catalog import run_catalog
from app.config import Config
from app.factorize import factor, uniqueness_check, verify
from app.families import MonoidSpec, build, realize
from app.kernel import ClassificationError, MonoidError, SpecError
from app.lab import classify, count_squarefree, search, table_consistency, witness_for_count
from app.predicates import Scheme, atoms, squarefree_set
from app.profile import monoid_profile, sign
from app.report import FORMATS, Report, verdict_data, write_report
from app.submonoid import (
    SubmonoidContext,
    TransferProperty,
    atoms_of_M,
    check_transfer,
    closure_checks,
    cofactor_report,
    membership,
    squarefree_report,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

SUBMONOID_CHECKS = tuple(p.value for p in TransferProperty) + (
    'cofactor-suite', 'squarefree-suite', 'closures')

# numbered spellings accepted by --check
CHECK_ALIASES = {
    '1.1': TransferProperty.ATOMS_SQUAREFREE.value,
    '1.2': TransferProperty.SQUAREFREE_PRESERVED.value,
    '1.3': TransferProperty.SQUARE_SPLIT.value,
    '1.4': TransferProperty.SQUARE_COFACTOR.value,
    'thm43': 'cofactor-suite',
    'thm51': 'squarefree-suite',
}


def submonoid_check(text: str) -> str:
    return CHECK_ALIASES.get(text, text)


def configure_logging():
    log_level_name = os.environ.get('LOG_LEVEL', 'INFO').upper()
    logging.basicConfig(
        level=getattr(logging, log_level_name, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

def read_spec(arg: str, config: Config) -> MonoidSpec:
    """A spec given as a file path or as inline text."""
    text = arg
    if os.path.isfile(arg):
        with open(arg) as f:
            text = f.read()
    return build(text, config.family_defaults())

# Subcommands

def cmd_analyze(args, config: Config) -> Report:
    spec = read_spec(args.spec, config)
    m = realize(spec)
    bound = args.bound or config.element_bound
    profile = monoid_profile(m, bound, node_budget=config.node_budget, workers=args.workers)
    data = {
        'properties': {name: verdict_data(m, v) for name, v in profile.verdicts.items()},
        'conflicts': profile.conflicts,
        'evaluated': profile.evaluated,
    }
    if m.enumerable:
        data['atoms'] = [m.render(a) for a in atoms(m, bound).members]
        data['squarefree'] = [m.render(a) for a in squarefree_set(m, bound).members]
    return Report('analyze', {'spec': spec.key, 'bound': bound}, data, ok=profile.consistent)

def cmd_factor(args, config: Config) -> Report:
    spec = read_spec(args.spec, config)
    m = realize(spec)
    a = m.parse(args.element)
    verdict = factor(m, a, args.scheme, args.bound, method=args.method,
                     node_budget=config.node_budget, max_power=config.max_power)
    data: dict = {'factorization': verdict_data(m, verdict)}
    if verdict.holds:
        data['verification'] = verdict_data(m, verify(m, a, verdict.witness[0]))
    if args.unique:
        data['uniqueness'] = verdict_data(m, uniqueness_check(m, a, args.scheme, args.bound,
                                                              config.node_budget))
    meta = {'spec': spec.key, 'element': m.render(a), 'scheme': args.scheme, 'method': args.method}
    return Report('factor', meta, data)

def cmd_submonoid(args, config: Config) -> Report:
    spec = read_spec(args.spec, config)
    element_bound = args.element_bound or config.element_bound
    product_bound = args.product_bound or element_bound * config.product_factor
    ctx = SubmonoidContext.from_spec(spec, element_bound, product_bound)
    amb = ctx.ambient
    data: dict = {'atoms': [ctx.monoid.render(a) for a in atoms_of_M(ctx)]}
    for text in args.member or ():
        h = amb.parse(text)
        data.setdefault('membership', {})[amb.render(h)] = verdict_data(amb, membership(ctx, h))
    ok = True
    if args.check in ('cofactor-suite', 'squarefree-suite'):
        run = cofactor_report if args.check == 'cofactor-suite' else squarefree_report
        suite = run(ctx, workers=args.workers)
        data['conditions'] = {name: verdict_data(amb, v) for name, v in suite.verdicts.items()}
        data['consequences'] = {name: verdict_data(amb, v) for name, v in suite.consequences.items()}
        data['consistent'] = suite.consistent
        ok = suite.consistent and suite.consequences['atoms-follow'].holds is not False
    elif args.check == 'closures':
        closures = closure_checks(ctx)
        data['closures'] = {name: verdict_data(amb, v) for name, v in closures.items()}
        ok = closures['divisor_closed'].holds == closures['divisor_closed_squarefree'].holds
    else:
        data[args.check] = verdict_data(amb, check_transfer(ctx, args.check))
    meta = {'spec': spec.key, 'check': args.check, 'element_bound': element_bound,
            'product_bound': product_bound}
    return Report('submonoid', meta, data, ok=ok)

def cmd_classify(args, config: Config) -> Report:
    spec = read_spec(args.spec, config)
    bound = args.bound or config.element_bound
    row = classify(spec, bound, node_budget=config.node_budget, workers=args.workers)
    data = {
        'accp_atm': sorted(row.accp_atm),
        'gcd_decomp': sorted(row.gcd_decomp),
        'schemes': row.signs(),
        'properties': {name: sign(row.verdicts[name])
                       for name in ('atomic', 'accp', 'bf', 'gcd', 'decomposition', 'factorial')},
        'table': verdict_data(None, table_consistency([row])),
        'conflicts': row.conflicts,
    }
    return Report('classify', {'spec': row.key, 'bound': bound}, data, ok=not row.conflicts)

def cmd_count(args, config: Config) -> Report:
    if args.witness is not None:
        spec = witness_for_count(args.witness)
    elif args.spec:
        spec = read_spec(args.spec, config)
    else:
        raise SpecError('count', 'give a spec or --witness n')
    m = realize(spec)
    result = count_squarefree(spec, args.bound or 2 * config.element_bound)
    data = {
        'count': result.count if result.exact else 'infinite/unknown',
        'members': [m.render(a) for a in result.members],
        'exact': result.exact,
        'note': result.note,
    }
    ok = True
    if args.witness is not None:
        data['expected'] = args.witness
        ok = result.count == args.witness
    return Report('count', {'spec': spec.key}, data, ok=ok)

def cmd_catalog(args, config: Config) -> Report:
    run = run_catalog(args.catalog or config.catalog_path, args.only, workers=args.workers)
    entries = [{'id': o.id, 'check': o.check, 'source': o.source, 'passed': o.passed,
                'detail': o.detail}
               for o in run.outcomes]
    data = {'entries': entries, 'failures': [o.id for o in run.failures]}
    return Report('catalog', {'entries': len(entries)}, data, ok=run.passed)

def cmd_search(args, config: Config) -> Report:
    bound = args.bound or config.element_bound
    result = search(bound=bound, sample=args.sample, seed=args.seed, workers=args.workers,
                    node_budget=config.node_budget)
    groups = []
    for signature, keys in result.groups.items():
        accp_atm, gcd_decomp, signs = signature
        groups.append({'accp_atm': list(accp_atm), 'gcd_decomp': list(gcd_decomp),
                       'schemes': dict(zip((s.value for s in Scheme), signs)), 'specs': keys})
    data = {
        'groups': groups,
        'chain_support_agree_under_accp': result.agreements,
        'chain_support_candidates': result.candidates,
        'failures': result.failures,
    }
    meta = {'bound': bound, 'seed': args.seed, 'sample': args.sample}
    return Report('search', meta, data, ok=not result.failures)

# Argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=FORMATS, default=None, help='report format')
    common.add_argument('--out', default=None, help='also write the report here (bare names go to report.out_dir)')
    common.add_argument('--seed', type=int, default=None, help='sampling seed')
    common.add_argument('--workers', type=int, default=None, help='parallel checks')
    common.add_argument('--config', default=None, help='YAML configuration file')

    parser = argparse.ArgumentParser(prog='sqfree-lab', description=__doc__)
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('analyze', parents=[common], help='profile a monoid')
    p.add_argument('spec')
    p.add_argument('--bound', type=int)
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser('factor', parents=[common], help='factor an element under a scheme')
    p.add_argument('spec')
    p.add_argument('element')
    p.add_argument('--scheme', required=True, choices=[s.value for s in Scheme])
    p.add_argument('--method', choices=('auto', 'closed', 'search'), default='auto')
    p.add_argument('--bound', type=int)
    p.add_argument('--unique', action='store_true', help='also search for a different factorization')
    p.set_defaults(handler=cmd_factor)

    p = sub.add_parser('submonoid', parents=[common], help='transfer conditions for M inside N^n')
    p.add_argument('spec')
    p.add_argument('--check', required=True, type=submonoid_check, choices=SUBMONOID_CHECKS,
                   help='condition name or its numbered alias (1.1 to 1.4, thm43, thm51)')
    p.add_argument('--element-bound', type=int)
    p.add_argument('--product-bound', type=int)
    p.add_argument('--member', action='append', help='ambient element to test for membership')
    p.set_defaults(handler=cmd_submonoid)

    p = sub.add_parser('classify', parents=[common], help='place a monoid in the classification table')
    p.add_argument('spec')
    p.add_argument('--bound', type=int)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser('count', parents=[common], help='count square-free elements')
    p.add_argument('spec', nargs='?')
    p.add_argument('--witness', type=int, help='build a monoid with exactly this many')
    p.add_argument('--bound', type=int)
    p.set_defaults(handler=cmd_count)

    p = sub.add_parser('catalog', parents=[common], help='reproduce the recorded catalog')
    p.add_argument('--catalog', default=None, help='catalog YAML file')
    p.add_argument('--only', action='append', help='run only this entry id')
    p.set_defaults(handler=cmd_catalog)

    p = sub.add_parser('search', parents=[common], help='classify a grid of small monoids')
    p.add_argument('--bound', type=int)
    p.add_argument('--sample', type=int, help='classify only this many grid specs')
    p.set_defaults(handler=cmd_search)
    return parser

def report_path(out: str | None, config: Config) -> str | None:
    """Bare file names go to the configured report directory."""
    if out and not os.path.dirname(out):
        return os.path.join(config.report_dir, out)
    return out

def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging()
    try:
        config = Config(args.config)
        args.workers = args.workers or config.workers
        args.seed = config.seed if args.seed is None else args.seed
        fmt = args.format or config.report_format
        handler: Callable[[argparse.Namespace, Config], Report] = args.handler
        report = handler(args, config)
        report.meta.setdefault('seed', args.seed)
        out = report_path(args.out, config)
    except ClassificationError as e:
        logger.error(f"Classification failed: {e}")
        return EXIT_FAILED
    except MonoidError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(write_report(report, fmt, out))
    if not report.ok:
        logger.error(f"{args.command} finished with failures")
        return EXIT_FAILED
    return EXIT_OK

if __name__ == '__main__':
    sys.exit(main())
