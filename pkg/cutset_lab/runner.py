from typing import Any, Dict, Iterable, List, Optional, Sequence
import csv
import io
import json
import math
import os
import random

import numpy as np

from . import __version__
from .config import ExperimentConfig
from .core.graph_core import Edge, GraphProvider, GraphWindow, build_window, dump_window, format_edge, window_to_dot
from .core.graph_providers import make_provider
from .cutsets.cutset_closeness import CONVENTIONS, closeness, closeness_bruteforce, sup_closeness
from .cutsets.cutset_enumerate import Cutset, enumerate_min_cutsets_upto, fit_growth_constant, is_minimal_cutset
from .cutsets.cutset_subsets import count_connected_subsets, decode_walk, encode_walk, iter_connected_subsets
from .cycles import crossing_cycle_witness, cycle_walk, relator_cycles, sample_crossing_instances, verify_half_t_bound
from .errors import ConfigError, ExperimentAssertionError
from .groups.group_cayley import CayleyProvider, word_to_element
from .groups.group_dl import build_Hk
from .qi import boundary_growth_check, fiber_experiment, make_map, neighborhood_closeness_check, transfer_noncloseness, verify_bilipschitz
from .treegrowth import SpanningTreeWindow, check_subperiodic, dump_tree, finiteness_experiment, fx_and_s_sets, growth, growth_ratios, ray_profile
from .utils import log, progress


def seed_all(seed: int) -> random.Random:
    random.seed(seed)
    np.random.seed(seed)
    return random.Random(seed)


def _csv_text(fieldnames: Sequence[str], rows: Iterable[Dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames = list(fieldnames), lineterminator = '\n')
    writer.writeheader()
    for row in rows:
        writer.writerow({ k: _cell(row.get(k)) for k in fieldnames })
    return buf.getvalue()


def _cell(value: Any) -> Any:
    if value is None:
        return ''
    if isinstance(value, float):
        return f'{value:.6f}'
    return value


def _jsonl_text(records: Iterable[Dict[str, Any]]) -> str:
    return ''.join(json.dumps(r, sort_keys = True) + '\n' for r in records)


def write_atomic(path: str, text: str) -> None:
    tmp = path + '.tmp'
    with open(tmp, 'w', newline = '') as f:
        f.write(text)
    os.replace(tmp, path)


def _matches(actual: Any, expected: Any) -> bool:
    if isinstance(expected, dict) and isinstance(actual, dict):
        return all(k in actual and _matches(actual[k], v) for k, v in expected.items())
    if isinstance(expected, list) and isinstance(actual, (list, tuple)):
        return len(actual) == len(expected) and all(_matches(a, e) for a, e in zip(actual, expected))
    if isinstance(expected, float) or isinstance(actual, float):
        return actual is not None and math.isclose(actual, expected, rel_tol = 1e-6)
    return actual == expected


class ExperimentRunner:
    def __init__(self,
            config: ExperimentConfig,
            output_dir: Optional[str] = None,
            verbose: Optional[bool] = None
    ) -> None:
        self.config = config
        self.params = config.experiment_params()
        self.verbose = config.verbose if verbose is None else verbose
        self.output_dir = output_dir if output_dir is not None else config.output.dir
        self.seed = config.seed
        self.rng = seed_all(self.seed)
        self.outputs: Dict[str, str] = {}
        self.failures: List[str] = []
        self.provider = make_provider(config.provider.family, **config.provider.params)

    def log(self, message: Any) -> None:
        log(message, self.verbose)

    def fail(self, message: str) -> None:
        self.log(f'FAILED: {message}')
        self.failures.append(message)

    def window(self, provider: GraphProvider, R: int) -> GraphWindow:
        return build_window(provider, R, max_vertices = self.config.caps.max_vertices, verbose = self.verbose)

    def emit(self, name: str, text: str) -> None:
        self.outputs[name] = text

    def emit_window(self, w: GraphWindow, highlight: Iterable[Edge] = ()) -> None:
        if self.config.output.dot:
            self.emit('window.dot', window_to_dot(w, highlight))
        if self.config.output.dump_window:
            self.emit('window.tsv', '\n'.join(dump_window(w)) + '\n')

    def run(self) -> Dict[str, Any]:
        experiment = self.config.experiment
        self.log('\n----------------')
        self.log(f'Run {experiment}')
        hyper_params = {
                'experiment': experiment,
                'provider': repr(self.provider),
                'radius': self.config.radius,
                'params': self.params.model_dump(),
                'caps': self.config.caps.model_dump(),
                'seed': self.seed,
                'version': __version__
        }
        self.log(hyper_params)
        method = getattr(self, 'run_' + experiment.replace('-', '_'))
        results = method()
        self.log('\n----------------')
        self.log('Check expectations')
        self._check_expectations(results)
        self._write_outputs(results)
        self.log('\n----------------')
        self.log('Done' if not self.failures else f'{len(self.failures)} failures')
        if self.failures:
            raise ExperimentAssertionError('; '.join(self.failures))
        return results

    def _check_expectations(self, results: Dict[str, Any]) -> None:
        for key, expected in self.config.expect.items():
            if key not in results:
                raise ConfigError(f'expect.{key}: {self.config.experiment} reports no such value; known: {sorted(results)}')
            if not _matches(results[key], expected):
                self.fail(f'expect.{key}: expected {expected!r}, got {results[key]!r}')
            else:
                self.log(f'expect.{key}: ok')

    def _write_outputs(self, results: Dict[str, Any]) -> None:
        os.makedirs(self.output_dir, exist_ok = True)
        for name in sorted(self.outputs):
            write_atomic(os.path.join(self.output_dir, name), self.outputs[name])
        manifest = {
                'version': __version__,
                'config': self.config.model_dump(mode = 'json'),
                'results': results,
                'outputs': sorted(self.outputs),
                'failures': self.failures
        }
        write_atomic(os.path.join(self.output_dir, 'manifest.json'), json.dumps(manifest, indent = 2, sort_keys = True, default = str) + '\n')
        self.log(f'wrote {len(self.outputs) + 1} files to {self.output_dir}')

    def _edges_text(self, w: GraphWindow, edges: Iterable[Edge]) -> str:
        return ' '.join(format_edge(w, e) for e in sorted(edges))

    def run_enumerate(self) -> Dict[str, Any]:
        p = self.params
        w = self.window(self.provider, self.config.radius)
        found: Dict[int, List[Cutset]] = { n: [] for n in range(1, p.n_max + 1) }
        for shard in progress(range(p.shards), desc = 'Shards', verbose = self.verbose and p.shards > 1):
            part = enumerate_min_cutsets_upto(
                    w,
                    p.n_max,
                    max_nodes = self.config.caps.max_nodes,
                    shard = shard,
                    shards = p.shards,
                    verbose = self.verbose
            )
            for n, cutsets in part.items():
                found[n].extend(cutsets)
        for n in found:
            found[n].sort(key = lambda c: c.edges)
        counts = { n: len(found[n]) for n in found }
        rows = []
        for n in found:
            alpha, _ = fit_growth_constant({ m: counts[m] for m in counts if m <= n })
            rows.append({ 'n': n, 'count': counts[n], 'alpha_running': alpha })
        self.emit('counts.csv', _csv_text(['n', 'count', 'alpha_running'], rows))
        stream = []
        for n in found:
            for c in found[n]:
                line = f'{n}\t{self._edges_text(w, c.edges)}'
                if p.with_closeness:
                    line += f'\t{closeness(w, c.edges, p.convention, kind = "edge").value}'
                stream.append(line + '\n')
                if p.verify:
                    check = is_minimal_cutset(w, c.edges)
                    if not check.minimal or check.K != c.K:
                        self.fail(f'cutset {self._edges_text(w, c.edges)} fails its certificate: {check.reason}')
        self.emit('cutsets.tsv', ''.join(stream))
        largest = next((found[n][0] for n in sorted(found, reverse = True) if found[n]), None)
        self.emit_window(w, largest.edges if largest else ())
        alpha, fit_range = fit_growth_constant(counts)
        return {
                'counts': counts,
                'total': sum(counts.values()),
                'alpha': alpha,
                'fit_range': list(fit_range) if fit_range else None
        }

    def run_closeness_sup(self) -> Dict[str, Any]:
        p = self.params
        w = self.window(self.provider, self.config.radius)
        table = sup_closeness(w, p.n_max, p.convention, max_nodes = self.config.caps.max_nodes, verbose = self.verbose)
        rows = [{
                'n': r.n,
                'count': r.count,
                'max_closeness': r.max_closeness,
                'running_max': r.running_max,
                'witness': self._edges_text(w, r.witness.edges) if r.witness else None
        } for r in table]
        self.emit('closeness.csv', _csv_text(['n', 'count', 'max_closeness', 'running_max', 'witness'], rows))
        best = max((r for r in table if r.witness), key = lambda r: (r.max_closeness, -r.n), default = None)
        self.emit_window(w, best.witness.edges if best else ())
        results = {
                'running_max': table[-1].running_max if table else None,
                'max_closeness': { r.n: r.max_closeness for r in table },
                'counts': { r.n: r.count for r in table }
        }
        if p.oracle_samples:
            results.update(self._closeness_oracle(w, p.oracle_samples, min(p.n_max, p.oracle_max_size)))
        return results

    def _closeness_oracle(self, w: GraphWindow, samples: int, size: int) -> Dict[str, Any]:
        by_size = enumerate_min_cutsets_upto(w, size, max_nodes = self.config.caps.max_nodes)
        pool = [c for n in sorted(by_size) for c in by_size[n] if n >= 2]
        if not pool:
            raise ConfigError(f'params.oracle_samples: no minimal cutsets of size 2..{size} to sample')
        mismatches = 0
        for _ in progress(range(samples), desc = 'Oracle', verbose = self.verbose):
            c = self.rng.choice(pool)
            for convention in CONVENTIONS:
                fast = closeness(w, c.edges, convention, kind = 'edge').value
                slow = closeness_bruteforce(w, c.edges, convention, kind = 'edge').value
                if fast != slow:
                    mismatches += 1
                    self.fail(f'{convention} closeness {fast} != brute force {slow} on {self._edges_text(w, c.edges)}')
        return { 'oracle_checked': samples, 'oracle_mismatches': mismatches }

    def run_dl_family(self) -> Dict[str, Any]:
        p = self.params
        w = self.window(self.provider, self.config.radius)
        rows = []
        running = None
        last = None
        for k in progress(range(p.k_min, p.k_max + 1), desc = 'k', verbose = self.verbose):
            fam = build_Hk(k, w)
            check = is_minimal_cutset(w, fam.C)
            dist = fam.distance_AB(w)
            value = closeness(w, fam.C, p.convention, kind = 'edge').value
            if running is not None and value < running:
                self.log(f'k = {k}: closeness {value} below the running maximum {running}')
            running = value if running is None else max(running, value)
            if not check.minimal:
                self.fail(f'C_{k} is not a minimal cutset: {check.reason}')
            if dist != k:
                self.fail(f'dist(A_{k}, B_{k}) = {dist}, expected {k}')
            if running < k - 1:
                self.fail(f'running closeness maximum {running} below {k - 1} at |C_{k}| = {len(fam.C)}')
            rows.append({
                    'k': k,
                    'H': len(fam.H),
                    'C': len(fam.C),
                    'A': len(fam.A),
                    'B': len(fam.B),
                    'minimal': check.minimal,
                    'dist_AB': dist,
                    'closeness': value,
                    'running_max': running
            })
            self.log(rows[-1])
            last = fam
        self.emit('dl_family.csv', _csv_text(['k', 'H', 'C', 'A', 'B', 'minimal', 'dist_AB', 'closeness', 'running_max'], rows))
        self.emit_window(w, last.C if last else ())
        return {
                'dist_AB': [r['dist_AB'] for r in rows],
                'minimal': all(r['minimal'] for r in rows),
                'closeness': [r['closeness'] for r in rows],
                'C_sizes': [r['C'] for r in rows],
                'running_max': running
        }

    def run_half_t(self) -> Dict[str, Any]:
        p = self.params
        w = self.window(self.provider, self.config.radius)
        report = verify_half_t_bound(w, p.relators, p.n_max, max_nodes = self.config.caps.max_nodes, verbose = self.verbose)
        self.emit('half_t.csv', _csv_text(['t', 'bound', 'checked', 'max_closeness', 'ok'], [report._asdict()]))
        if not report.ok:
            cutset, witness = report.counterexample
            self.emit('counterexample.jsonl', _jsonl_text([{
                    'edges': [format_edge(w, e) for e in cutset.edges],
                    'closeness': witness.value,
                    'Y1': [format_edge(w, e) for e in witness.Y1],
                    'Y2': [format_edge(w, e) for e in witness.Y2]
            }]))
            self.fail(f'closeness {witness.value} exceeds t / 2 = {report.bound}')
        witnesses = []
        max_distance = None
        if p.instances:
            basis = relator_cycles(w, p.relators)
            fmt = w.provider.format_key
            instances = sample_crossing_instances(
                    w,
                    self.rng,
                    p.instances,
                    max_size = p.instance_max_size,
                    y_depth = p.instance_y_depth
            )
            for i, (Pi, Pi1, Pi2, x, y) in enumerate(progress(instances, desc = 'Witnesses', verbose = self.verbose)):
                try:
                    found = crossing_cycle_witness(w, Pi, Pi1, Pi2, x, y, basis)
                except ExperimentAssertionError as e:
                    self.fail(f'crossing instance {i}: {e}')
                    continue
                if len(found.cycle) > basis.t or found.endpoint_distance > basis.t / 2:
                    self.fail(f'crossing instance {i}: witness of length {len(found.cycle)} at distance {found.endpoint_distance}')
                max_distance = found.endpoint_distance if max_distance is None else max(max_distance, found.endpoint_distance)
                walk = ' '.join(fmt(v) for v in cycle_walk(found.cycle))
                witnesses.append(
                        f'{walk}\t{format_edge(w, found.edge_in_pi1)}\t{format_edge(w, found.edge_in_pi2)}'
                        f'\t{fmt(x)}\t{fmt(y)}\n'
                )
            self.emit('witnesses.tsv', ''.join(witnesses))
        return {
                't': report.t,
                'checked': report.checked,
                'max_closeness': report.max_closeness,
                'ok': report.ok,
                'witnesses': len(witnesses),
                'max_endpoint_distance': max_distance
        }

    def _source_sets(self, w: GraphWindow) -> List[Any]:
        p = self.params
        sets = []
        for k in p.transfer_hk:
            sets.append((f'H_{k}', build_Hk(k, w).H))
        for length in p.transfer_boxes:
            box = frozenset((i, 0) for i in range(length))
            for v in box:
                w.require(v)
            sets.append((f'box_{length}', box))
        return sets

    def run_qi_transfer(self) -> Dict[str, Any]:
        p = self.params
        config = self.config
        target = make_provider(config.target.family, **config.target.params)
        wG = self.window(self.provider, config.radius)
        wH = self.window(target, config.target_radius or config.radius)
        qmap = make_map(p.map, self.provider, target, m = p.m)
        self.log('\n----------------')
        self.log('Certify the constant')
        bl = verify_bilipschitz(qmap, wG, wH, sample_radius = p.sample_radius)
        self.log(f'{bl.pairs} pairs, m = {bl.m}')
        m = bl.m if qmap.m is None else qmap.m
        if bl.m > m:
            self.fail(f'sandwich inequality needs m = {bl.m}, above the claimed {m}')
        results: Dict[str, Any] = { 'm': m, 'certified_m': bl.m, 'pairs': bl.pairs }

        if p.n_max:
            self.log('\n----------------')
            self.log('Boundary growth checks')
            by_size = enumerate_min_cutsets_upto(wG, p.n_max, max_nodes = config.caps.max_nodes, verbose = self.verbose)
            rows = []
            for n in sorted(by_size):
                for c in by_size[n]:
                    rep = boundary_growth_check(qmap, wG, wH, c.K, m)
                    if not rep.ok:
                        self.fail(f'boundary growth check fails for {self._edges_text(wG, c.edges)}: {rep}')
                    rows.append({ 'n': n, 'K': len(c.K), **rep._asdict(), 'ok': rep.ok })
            fields = ['n', 'K', 'kappa_boundary', 'image_boundary', 'phi_boundary', 'tau_extra', 'ok']
            self.emit('boundary_growth.csv', _csv_text(fields, rows))
            results['growth_checks'] = len(rows)
            results['growth_ok'] = all(r['ok'] for r in rows)

        if p.fiber_sizes:
            rows = []
            for n in p.fiber_sizes:
                rep = fiber_experiment(qmap, wG, wH, n, m, max_nodes = config.caps.max_nodes, verbose = self.verbose)
                rows.append({
                        'n': n,
                        'count': rep.count,
                        'images': len(rep.fiber_sizes),
                        'max_fiber': rep.max_fiber,
                        'c_estimate': rep.c_estimate
                })
            self.emit('fibers.csv', _csv_text(['n', 'count', 'images', 'max_fiber', 'c_estimate'], rows))
            results['max_fiber'] = { r['n']: r['max_fiber'] for r in rows }

        sets = self._source_sets(wG)
        if sets:
            rows = []
            for name, X in sets:
                rep = transfer_noncloseness(qmap, wG, wH, X, m, convention = p.convention)
                if rep.precondition_ok and not rep.vacuous and not rep.holds:
                    self.fail(f'{name}: closeness {rep.target_closeness} does not exceed {rep.bound}')
                rows.append({
                        'set': name,
                        'k': rep.k,
                        'm': rep.m,
                        'radius': rep.radius,
                        'source_closeness': rep.source_closeness,
                        'precondition_ok': rep.precondition_ok,
                        'cutset_size': rep.cutset.size if rep.cutset else None,
                        'target_closeness': rep.target_closeness,
                        'bound': rep.bound,
                        'vacuous': rep.vacuous,
                        'holds': rep.holds
                })
                self.log(rows[-1])
            fields = ['set', 'k', 'm', 'radius', 'source_closeness', 'precondition_ok', 'cutset_size', 'target_closeness', 'bound', 'vacuous', 'holds']
            self.emit('transfer.csv', _csv_text(fields, rows))
            results['transfer'] = [{ k: r[k] for k in ('set', 'target_closeness', 'vacuous', 'holds') } for r in rows]

        if p.closure_hk:
            rows = []
            for k in p.closure_hk:
                H = build_Hk(k, wG).H
                for n in range(p.closure_n + 1):
                    source, target_value, ok = neighborhood_closeness_check(wG, H, n, p.convention)
                    if not ok:
                        self.fail(f'H_{k}, n = {n}: closeness {target_value} below {source} - {2 * n}')
                    rows.append({ 'k': k, 'n': n, 'source': source, 'target': target_value, 'ok': ok })
            self.emit('closure.csv', _csv_text(['k', 'n', 'source', 'target', 'ok'], rows))
            results['closure_ok'] = all(r['ok'] for r in rows)
        return results

    def run_growth(self) -> Dict[str, Any]:
        p = self.params
        w = self.window(self.provider, self.config.radius)
        tree = SpanningTreeWindow(w)
        geodesic = tree.is_geodesic()
        if not geodesic:
            self.fail('the shortlex tree is not geodesic')
        sizes = growth(w, p.n_max)
        tree_sizes = growth(tree, p.n_max)
        if sizes != tree_sizes:
            self.fail(f'tree growth {tree_sizes} differs from graph growth {sizes}')
        ratios = [None] + growth_ratios(sizes)
        fx = fx_and_s_sets(tree, margin = p.fx_margin)
        rays = ray_profile(tree)
        rows = [{
                'n': n,
                'ball': sizes[n],
                'tree_ball': tree_sizes[n],
                'ratio': ratios[n],
                'max_fx': fx.max_by_depth[n],
                'rays': rays[n]
        } for n in range(p.n_max + 1)]
        self.emit('growth.csv', _csv_text(['n', 'ball', 'tree_ball', 'ratio', 'max_fx', 'rays'], rows))
        subperiodic = {}
        if p.subperiodic:
            provider = self.provider
            assert isinstance(provider, CayleyProvider), 'subperiodicity checks need a Cayley provider'
            for word in p.subperiodic:
                x = word_to_element(provider.group, provider.gens, provider.gens.parse(word))
                witness = check_subperiodic(tree, x, p.subperiodic_depth)
                subperiodic[word] = witness is not None
                self.log(f'T_{word} to depth {p.subperiodic_depth}: ' + ('embedded' if witness else 'not found in window'))
        if p.dump_tree:
            self.emit('tree.tsv', '\n'.join(dump_tree(tree)) + '\n')
        self.emit_window(w)
        certain = [f for v, f in fx.fx.items() if v not in fx.uncertain]
        return {
                'geodesic': geodesic,
                'growth': sizes,
                'tree_growth_equal': sizes == tree_sizes,
                'max_fx': max(certain, default = 0),
                'fx_max_by_depth': fx.max_by_depth[:p.n_max + 1],
                'S_size': len(fx.S),
                'rays': rays[:p.n_max + 1],
                'subperiodic': subperiodic
        }

    def run_finiteness(self) -> Dict[str, Any]:
        p = self.params
        report = finiteness_experiment(
                self.provider,
                p.n,
                p.radii,
                max_vertices = self.config.caps.max_vertices,
                max_nodes = self.config.caps.max_nodes,
                verbose = self.verbose
        )
        rows = [{ 'R': R, 'count': c } for R, c in zip(report.radii, report.counts)]
        self.emit('finiteness.csv', _csv_text(['R', 'count'], rows))
        return {
                'counts': dict(zip(report.radii, report.counts)),
                'stabilized_at': report.stabilized_at,
                'core_radius': report.core_radius
        }

    def run_subgraph_count(self) -> Dict[str, Any]:
        p = self.params
        w = self.window(self.provider, self.config.radius)
        d = self.provider.degree_bound
        counts = count_connected_subsets(w, p.n_max, verbose = self.verbose)
        rows = [{ 'n': n, 'count': c, 'bound': d ** (2 * n), 'within_bound': c <= d ** (2 * n) } for n, c in counts.items()]
        for r in rows:
            if not r['within_bound']:
                self.fail(f'{r["count"]} connected {r["n"]}-sets exceed d^(2n) = {r["bound"]}')
        self.emit('subsets.csv', _csv_text(['n', 'count', 'bound', 'within_bound'], rows))
        cert_max = p.n_max if p.certificate_n_max is None else p.certificate_n_max
        checked = 0
        bad = 0
        for n in progress(range(1, cert_max + 1), desc = 'Certificates', verbose = self.verbose):
            for K in iter_connected_subsets(w, n):
                cert = encode_walk(w, K)
                checked += 1
                if decode_walk(w, cert) != K or len(cert.steps) > 2 * n or any(s >= d for s in cert.steps):
                    bad += 1
        if bad:
            self.fail(f'{bad} of {checked} walk certificates do not round-trip')
        self.emit_window(w)
        return {
                'counts': counts,
                'bound_ok': all(r['within_bound'] for r in rows),
                'certificates_checked': checked,
                'certificates_ok': bad == 0
        }
