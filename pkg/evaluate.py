"""
数值验证模块
批量运行验证检查（常数、oracle 对照、管线恒等式），生成验证报告
"""
import json
import math
import os
from datetime import datetime
from typing import Any, Callable, Dict, List

import numpy as np

from config import VERIFICATION_CHECKS_PATH
from ends.epstein_end import EndFrame, beltrami_of, hodge_star_matrix, polynomial_frame
from ends.model_deformation import end_energy, omega_phi_integrand, wedge_density
from ends.schwarzian import ConformalMetric, QuadDiff, RationalMap, nehari_sup, qd_lp_norm
from geometry.laminations import bending_norm_search, fence, lipschitz_check, pleated_plane
from geometry.sl2_kinematics import HalfSpacePoint, Sl2Matrix, bundle_norm_squared, norm_on_axis
from geometry.tube_trig import (
    ConeAxisData,
    bending_length_constant,
    constant_discrepancy,
    margulis_tube_radius,
)
from reports.bound_reports import ConeLocusSpec, assemble_report, c_drill, eta
from utils.quadrature import Rectangle

# real (dx, dy) <-> complex (dz, dz-bar) coefficient changes
_TO_REAL = np.array([[1.0, 1j], [1.0, -1j]])
_TO_COMPLEX = np.array([[0.5, 0.5], [-0.5j, 0.5j]])
_ROTATION = np.array([[0.0, 1.0], [-1.0, 0.0]])


def hodge_star_oracle(a: np.ndarray) -> np.ndarray:
    """Hodge star of A* g_euc in the (dz, dz-bar) basis, from sqrt(det g) g^-1 and a 90 degree rotation."""
    g = a.T @ a
    star = math.sqrt(np.linalg.det(g)) * np.linalg.inv(g) @ _ROTATION
    return _TO_REAL @ star @ _TO_COMPLEX


def _random_orientation_preserving(rng: np.random.Generator) -> np.ndarray:
    while True:
        a = rng.normal(size=(2, 2))
        if np.linalg.det(a) > 0.05:
            return a


def _check_bending_constant(params: Dict[str, Any]) -> float:
    return bending_length_constant(params.get("L0", 0.5))


def _check_eta(params: Dict[str, Any]) -> float:
    return eta()


def _check_c_drill(params: Dict[str, Any]) -> float:
    return c_drill(params["K"])


def _check_final_bound(params: Dict[str, Any]) -> float:
    spec = ConeLocusSpec(components=[{"length": L} for L in params["lengths"]], K=params["K"])
    return assemble_report(spec).final_bound


def _check_tube_radius(params: Dict[str, Any]) -> float:
    return margulis_tube_radius(ConeAxisData(params["length"], params.get("angle", 2.0 * math.pi)))


def _check_exact_cap_constant(params: Dict[str, Any]) -> float:
    return constant_discrepancy().exact


def _check_pipeline_identity(params: Dict[str, Any]) -> float:
    """Max relative deviation of final_bound^2 from (2pi)^2 (1 + 2K) 3 sum(L) / (8 eta^2 14 pi)."""
    rng = np.random.default_rng(params.get("seed", 0))
    worst = 0.0
    for _ in range(params.get("trials", 50)):
        lengths = rng.uniform(1e-4, 0.1, size=rng.integers(1, 5))
        K = float(rng.uniform(0.5, 4.0))
        spec = ConeLocusSpec(components=[{"length": float(L)} for L in lengths], K=K)
        report = assemble_report(spec)
        expected = (2.0 * math.pi) ** 2 * (1.0 + 2.0 * K) * 3.0 * lengths.sum() / (8.0 * eta() ** 2 * 14.0 * math.pi)
        worst = max(worst, abs(report.final_bound ** 2 - expected) / expected)
    return worst


def _check_hodge_star(params: Dict[str, Any]) -> float:
    rng = np.random.default_rng(params.get("seed", 0))
    worst = 0.0
    for _ in range(params.get("trials", 100)):
        a = _random_orientation_preserving(rng)
        difference = hodge_star_matrix(beltrami_of(a)) - hodge_star_oracle(a)
        worst = max(worst, float(np.abs(difference).max()))
    return worst


def _check_norm_on_axis(params: Dict[str, Any]) -> float:
    rng = np.random.default_rng(params.get("seed", 0))
    worst = 0.0
    for _ in range(params.get("trials", 20)):
        a, b, c = rng.normal(size=3) + 1j * rng.normal(size=3)
        t = float(rng.uniform(0.3, 3.0))
        m = Sl2Matrix(complex(a), complex(b), complex(c))
        closed = norm_on_axis(m, t)
        oracle = bundle_norm_squared(m, HalfSpacePoint(0j, t))
        worst = max(worst, abs(closed - oracle) / closed)
    return worst


def _check_koebe_nehari(params: Dict[str, Any]) -> float:
    return nehari_sup(RationalMap.koebe(), [0j])


def _check_fuchsian_energy(params: Dict[str, Any]) -> float:
    """Relative gap between the Fuchsian end energy and 8 t^2 ||Phi||^2."""
    domain = Rectangle(-0.5, 0.5, -0.5, 0.5)
    rho = params.get("rho", 4.0)
    quad_diff = QuadDiff.polynomial([complex(*pair) for pair in params["phi"]], domain)
    frame = EndFrame.fuchsian(rho, domain)
    t = params["t"]
    energy = end_energy(quad_diff, frame, t).energy
    norm = qd_lp_norm(quad_diff, ConformalMetric.constant(rho, domain), 2, domain)
    target = 8.0 * t * t * norm ** 2
    return abs(energy - target) / target


def _check_wedge_identity(params: Dict[str, Any]) -> float:
    """Relative gap between the first-principles density and 64 times the closed-form integrand."""
    domain = Rectangle(-0.5, 0.5, -0.5, 0.5)
    quad_diff = QuadDiff.polynomial([complex(*pair) for pair in params["phi"]], domain)
    shape = params["shape"]
    frame = polynomial_frame(shape["xx"], shape["xy"], shape["yy"], ConformalMetric.constant(4.0, domain), domain)
    z = complex(*params["z"])
    t = params["t"]
    closed = 64.0 * float(omega_phi_integrand(quad_diff, frame, z, t))
    return abs(wedge_density(quad_diff, frame, z, t) - closed) / closed


def _check_fence_norm(params: Dict[str, Any]) -> float:
    lamination = fence(params.get("count", 3), params.get("spacing", 0.5))
    return bending_norm_search(lamination, params.get("L", 1.2)).value


def _check_pleated_lipschitz(params: Dict[str, Any]) -> float:
    lamination = fence(params.get("count", 3), params.get("spacing", 0.5), weight=params.get("weight", 1.0))
    plane = pleated_plane(lamination, complex(*params.get("basepoint", [0.1, 0.05])))
    return lipschitz_check(plane, samples=params.get("samples", 500))


CHECKS: Dict[str, Callable[[Dict[str, Any]], float]] = {
    "bending_constant": _check_bending_constant,
    "eta": _check_eta,
    "c_drill": _check_c_drill,
    "final_bound": _check_final_bound,
    "tube_radius": _check_tube_radius,
    "exact_cap_constant": _check_exact_cap_constant,
    "pipeline_identity": _check_pipeline_identity,
    "hodge_star": _check_hodge_star,
    "norm_on_axis": _check_norm_on_axis,
    "koebe_nehari": _check_koebe_nehari,
    "fuchsian_energy": _check_fuchsian_energy,
    "wedge_identity": _check_wedge_identity,
    "fence_norm": _check_fence_norm,
    "pleated_lipschitz": _check_pleated_lipschitz,
}


def load_verification_checks(json_path: str = None) -> List[Dict[str, Any]]:
    """
    加载验证检查

    Args:
        json_path: 验证检查 JSON 文件路径

    Returns:
        验证检查列表
    """
    if json_path is None:
        json_path = VERIFICATION_CHECKS_PATH

    if not os.path.exists(json_path):
        raise FileNotFoundError(f"验证检查文件不存在: {json_path}")

    with open(json_path, "r", encoding="utf-8") as f:
        checks = json.load(f)

    return checks


def check_passes(measured: float, expected: float, tolerance: float, compare: str = "abs") -> bool:
    """
    判断一次测量是否通过

    compare: "abs" 绝对误差, "rel" 相对误差, "le" 上界（measured <= expected + tolerance）
    """
    if not math.isfinite(measured):
        return False
    if compare == "abs":
        return abs(measured - expected) <= tolerance
    if compare == "rel":
        return abs(measured - expected) <= tolerance * abs(expected)
    if compare == "le":
        return measured <= expected + tolerance
    raise ValueError(f"未知的比较方式: {compare}")


def run_verification(
    checks: List[Dict[str, Any]] = None,
    output_report: str = "./verification_report.md",
) -> Dict[str, Any]:
    """
    运行验证检查

    Args:
        checks: 验证检查列表（如果为 None，从文件加载）
        output_report: 输出报告文件路径

    Returns:
        验证结果字典
    """
    if checks is None:
        checks = load_verification_checks()

    print(f"📋 加载了 {len(checks)} 个验证检查")
    print(f"\n🚀 开始验证...\n")

    results = []
    passed_count = 0

    for i, check in enumerate(checks, 1):
        name = check.get("name", "")
        category = check.get("category", "unknown")
        expected = float(check.get("expected", 0.0))
        tolerance = float(check.get("tolerance", 0.0))
        compare = check.get("compare", "abs")

        print(f"[{i}/{len(checks)}] {name}")

        try:
            runner = CHECKS.get(check.get("check", name))
            if runner is None:
                raise ValueError(f"未注册的检查: {check.get('check', name)}")
            measured = float(runner(check.get("params", {})))
            is_passed = check_passes(measured, expected, tolerance, compare)
            if is_passed:
                passed_count += 1
            results.append({
                "name": name,
                "category": category,
                "measured": measured,
                "expected": expected,
                "tolerance": tolerance,
                "compare": compare,
                "is_passed": is_passed,
            })
            status = "✅" if is_passed else "⚠️"
            print(f"   {status} 测量值: {measured:.12g} (期望 {expected:.12g}, {compare} {tolerance:g})")

        except (ValueError, RuntimeError) as e:
            print(f"   ❌ 错误: {e}")
            results.append({
                "name": name,
                "category": category,
                "measured": math.nan,
                "expected": expected,
                "tolerance": tolerance,
                "compare": compare,
                "is_passed": False,
                "error": str(e),
            })

    pass_rate = (passed_count / len(checks)) * 100 if checks else 0
    failed_results = [r for r in results if not r.get("is_passed", False)]

    report_lines = [
        "# 数值验证报告",
        "",
        f"**生成时间**: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}",
        "",
        "## 总体统计",
        "",
        f"- **总检查数**: {len(checks)}",
        f"- **通过**: {passed_count} ({pass_rate:.1f}%)",
        f"- **未通过**: {len(failed_results)}",
        "",
        "## 失败样例",
        "",
    ]

    if failed_results:
        for i, result in enumerate(failed_results, 1):
            report_lines.extend([
                f"### 失败样例 {i}",
                "",
                f"**检查**: {result['name']}",
                f"**分类**: {result.get('category', 'unknown')}",
                f"**期望**: {result['expected']:.12g} ({result['compare']} {result['tolerance']:g})",
                "",
            ])
            if result.get("error"):
                report_lines.append(f"**错误**: {result['error']}")
            else:
                report_lines.append(f"**测量值**: {result['measured']:.12g}")
            report_lines.append("")
    else:
        report_lines.append("无失败样例。")
        report_lines.append("")

    report_lines.extend([
        "## 详细结果",
        "",
        "| # | 检查 | 分类 | 测量值 | 期望 | 通过 |",
        "|---|------|------|--------|------|------|",
    ])

    for i, result in enumerate(results, 1):
        is_passed = "✅" if result.get("is_passed") else "❌"
        report_lines.append(
            f"| {i} | {result['name']} | {result.get('category', 'unknown')} | "
            f"{result['measured']:.10g} | {result['expected']:.10g} | {is_passed} |"
        )

    report_content = "\n".join(report_lines)

    with open(output_report, "w", encoding="utf-8") as f:
        f.write(report_content)

    print(f"\n📊 验证完成:")
    print(f"   - 通过率: {pass_rate:.1f}%")
    print(f"   - 失败样例: {len(failed_results)} 个")
    print(f"   - 报告已保存: {output_report}")

    return {
        "total": len(checks),
        "passed_count": passed_count,
        "pass_rate": pass_rate,
        "failed_samples": failed_results,
        "results": results,
    }


if __name__ == "__main__":
    import argparse

    parser = argparse.ArgumentParser(description="数值验证")
    parser.add_argument(
        "--checks",
        type=str,
        default=None,
        help="验证检查 JSON 文件路径",
    )
    parser.add_argument(
        "--output",
        type=str,
        default="./verification_report.md",
        help="输出报告文件路径",
    )

    args = parser.parse_args()

    run_verification(
        checks=None if args.checks is None else load_verification_checks(args.checks),
        output_report=args.output,
    )
