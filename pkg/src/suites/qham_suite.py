﻿"""
准哈密顿空间套件
双空间、融合双空间、广义双空间以及两个反例构造
"""

from dataclasses import replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.core.bitorsor import (Bitorsor, BitorsorGamma, NoFixedPoints, Twist, canonical_fixed_product_iso,
                               check_bitorsor, check_gamma_compat, check_simple_transitivity, fixed_subtorsor, inverse,
                               product)
from src.core.errors import CompatibilityError
from src.core.finite_group import FiniteAutomorphism
from src.core.liegroup import preset_automorphism
from src.core.qham import (QHamSpace, degenerate_space, double, enumerate_fixed_points, fixed_locus, fused_double,
                           generalized_double, planted_nonequivariant)
from src.core.report import VerificationReport
from src.core.surface import SurfaceData, match_generalized_double
from src.core.verification import (check_fusion_fixed_iso, check_fusion_fixed_iso_finite, check_gd_double,
                                   run_axiom_suite, verify_averaging)
from src.config.run_config import AXIOM_CHECKS
from src.suites.suite_interface import SuiteInterface

# 在不动点轨迹上重跑的公理
FIXED_LOCUS_AXIOMS = ('qh1', 'qh2', 'qh3', 'invariance', 'equivariance')


class QHamSuite(SuiteInterface):
    """双空间类构造的检验套件"""

    def __init__(self, config, context):
        super().__init__(config, context)
        self.space: Optional[QHamSpace] = None
        self.bitorsors: Tuple[Bitorsor, ...] = ()
        # fixed_iso 用的第二个拷贝及融合分量
        self.partner: Optional[Tuple[QHamSpace, str, str]] = None

    def get_name(self) -> str:
        return self.config.construction_type

    def _bitorsor(self, twist_name: str, name: str) -> Bitorsor:
        group = self.group
        if group.is_finite:
            # 有限群上只有平凡扭曲，解析阶段已拒绝其他名称
            if twist_name != 'identity':
                raise CompatibilityError(f"有限群上的扭曲只能是 identity，实际为 '{twist_name}'")
            aut = FiniteAutomorphism.identity(group)
        else:
            aut = preset_automorphism(group, twist_name)
        return Bitorsor(group, Twist.uniform(group, 1, aut), BitorsorGamma.diagonal(self.context.action, group, 1),
                        name=name)

    def build(self):
        construction = self.config.construction
        ctype = construction['type']
        group = self.group
        if ctype in ('double', 'fused_double', 'planted'):
            t1, t2 = construction['twists']
            self.bitorsors = (self._bitorsor(t1, "bG₁"), self._bitorsor(t2, "bG₂"))
            b1, b2 = self.bitorsors
            if ctype == 'fused_double':
                self.space = fused_double(b1, b2, slot_name="G")
                self.partner = (fused_double(b1, b2, slot_name="H"), "G", "H")
            else:
                self.space = double(b1, b2, names=("G1", "G2"))
                self.partner = (double(b1, b2, names=("H1", "H2")), "G1", "H1")
            if ctype == 'planted':
                w = group.exp(0.5 * group.basis.sum(axis=0))
                self.space = planted_nonequivariant(self.space, "G1", w)
        elif ctype == 'generalized_double':
            self.space = generalized_double(group, construction['m_inf'], construction['m_zero'])
        elif ctype == 'degenerate':
            self.space = degenerate_space(group)
        else:
            raise CompatibilityError(f"QHamSuite 不处理构造 {ctype}")

    def describe(self) -> Dict[str, Any]:
        return {
            'space': self.space.name,
            'coordinates': list(self.space.labels),
            'slots': [s.name for s in self.space.slots],
            'group': self.group.get_name(),
            'gamma_order': self.context.gamma.order,
        }

    # ---- 检验分派 ----

    def run_check(self, name: str, rng: np.random.Generator) -> List[VerificationReport]:
        config = self.config
        if name in AXIOM_CHECKS:
            return run_axiom_suite(self.space, rng, config.samples, [name], config.h, config.fd_step,
                                   config.tolerances, config.normalization, config.seed)
        handler = {
            'bitorsor': self._check_bitorsors,
            'fixed_locus': self._check_fixed_locus,
            'fixed_iso': self._check_fixed_iso,
            'fixed_transitivity': self._check_fixed_transitivity,
            'averaging': self._check_averaging,
            'gd_match': self._check_gd_match,
        }[name]
        return handler(rng)

    def _check_bitorsors(self, rng: np.random.Generator) -> List[VerificationReport]:
        b1, b2 = self.bitorsors
        tol = self.tolerance('bitorsor', 1e-12)
        seed, samples = self.config.seed, self.config.samples
        reports = []
        for b in (b1, b2, product(b1, b2), inverse(b1)):
            reports.append(check_bitorsor(b, rng, samples, tol, seed))
            reports.append(check_gamma_compat(b, rng, samples, tol, seed))
        return reports

    def _check_fixed_locus(self, rng: np.random.Generator) -> List[VerificationReport]:
        space, config = self.space, self.config
        if self.group.is_finite:
            return [self._fixed_locus_finite()]
        try:
            locus = fixed_locus(space, self.group.identity(space.n_coords))
        except CompatibilityError as e:
            return [VerificationReport('fixed_locus', 0, 0.0, 0.0, config.seed, details={'empty': True,
                                                                                      'reason': str(e)})]
        reports = run_axiom_suite(locus, rng, config.samples, FIXED_LOCUS_AXIOMS, config.h, config.fd_step,
                                  config.tolerances, config.normalization, config.seed)
        return [replace(r, check=f"fixed_locus.{r.check}") for r in reports]

    def _fixed_locus_finite(self) -> VerificationReport:
        """穷举不动点，检验其矩量映射落在各目标的不动子双旋子中"""
        space = self.space
        fixed = enumerate_fixed_points(space)
        outside = 0
        for p in fixed:
            mu = space.mu_components(p)
            for s in space.slots:
                if any(not np.array_equal(cmap.apply(mu[s.name]), mu[s.name]) for cmap in s.target.gamma.point_maps):
                    outside += 1
                    break
        return VerificationReport('fixed_locus', len(fixed), float(outside), 0.0, self.config.seed,
                                  details={'fixed_points': int(len(fixed)), 'empty': len(fixed) == 0})

    def _check_fixed_iso(self, rng: np.random.Generator) -> List[VerificationReport]:
        other, c1, c2 = self.partner
        space, config = self.space, self.config
        if self.group.is_finite:
            return [check_fusion_fixed_iso_finite(space, other, c1, c2, config.seed)]
        p1, p2 = self.group.identity(space.n_coords), self.group.identity(other.n_coords)
        return [check_fusion_fixed_iso(space, other, c1, c2, p1, p2, rng, config.samples,
                                       config.tolerance('fixed_iso'), config.seed)]

    def _check_fixed_transitivity(self, rng: np.random.Generator) -> List[VerificationReport]:
        config = self.config
        tol = self.tolerance('fixed_transitivity', 1e-10)
        fixed = [fixed_subtorsor(b) for b in self.bitorsors]
        reports = []
        for b, f in zip(self.bitorsors, fixed):
            if isinstance(f, NoFixedPoints):
                reports.append(VerificationReport(f"fixed_transitivity[{b.name}]", 0, 0.0, tol, config.seed,
                                                  details={'empty': True, 'reason': f.reason}))
            else:
                reports.append(check_simple_transitivity(f, rng, config.samples, tol, config.seed))
        if not any(isinstance(f, NoFixedPoints) for f in fixed):
            reports.append(canonical_fixed_product_iso(self.bitorsors[0], self.bitorsors[1], fixed[0], fixed[1],
                                                       rng, config.samples, tol, config.seed))
        return reports

    def _averaging_matrices(self) -> List[np.ndarray]:
        """Γ 的线性作用：矩阵群上为点切空间上的切映射，有限群上为 G 上函数空间的置换表示"""
        if self.group.is_finite:
            order = self.group.order
            mats = []
            for aut in self.context.action.auts:
                mat = np.zeros((order, order))
                mat[aut.images, np.arange(order)] = 1.0
                mats.append(mat)
            return mats
        return [cmap.tangent_matrix() for cmap in self.space.gamma.point_maps]

    def _check_averaging(self, rng: np.random.Generator) -> List[VerificationReport]:
        config = self.config
        return [verify_averaging(self._averaging_matrices(), rng, config.samples,
                                 self.tolerance('averaging', 1e-12), config.seed)]

    def _check_gd_match(self, rng: np.random.Generator) -> List[VerificationReport]:
        config = self.config
        tol = self.tolerance('gd_match', 1e-10)
        if config.construction_type == 'generalized_double':
            construction = config.construction
            surface = SurfaceData.annulus(m0=construction['m_zero'], m_inf=construction['m_inf'])
            return [match_generalized_double(surface, self.group, rng, config.samples, tol, config.seed)]
        return [check_gd_double(self.group, rng, config.samples, tol, config.seed)]
