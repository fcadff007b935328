"""
钻孔界命令行工具
drill-bound / end-energy / decay-fit / bending-norm / constants 子命令

退出码: 0 成功, 1 输入错误, 2 假设检查未通过（仍输出界）
"""
import argparse
import json
import logging
import math
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Optional

from config import DEFAULT_L0, DRILL_SPEC_PATH, QUAD_TOLERANCE, SMOOTH_NEHARI_K
from ends.model_deformation import (
    delta_omega_decay,
    delta_omega_energy_decay,
    end_energy,
)
from ends.schwarzian import qd_lp_norm
from geometry.laminations import (
    BENDING_ARC_LENGTH,
    bending_bound_check,
    bending_norm_search,
    load_lamination,
)
from geometry.tube_trig import (
    bending_length_constant,
    constant_discrepancy,
    f_packing,
    g_floor,
)
from reports.bound_reports import (
    ConeLocusSpec,
    assemble_report,
    c_drill,
    eta,
    load_frame_file,
    report_to_json,
)
from utils.errors import DerivativeError, QuadratureError
from utils.quadrature import Disk

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_FLAG_FAILURE = 2
EXIT_NUMERICAL_FAILURE = 3


def _progress(message: str) -> None:
    print(message, file=sys.stderr)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
        _progress(f"✅ 已写入: {output}")
    else:
        print(text)


def _json_text(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def build_spec(args: argparse.Namespace) -> ConeLocusSpec:
    """
    组装 ConeLocusSpec: 规格文件 < 命令行参数

    K 必须显式给出，或使用 --reference-smooth-nehari 插入 K=3/2（仅作光滑情形参考）
    """
    payload: Dict[str, Any] = {}
    spec_path = args.spec
    if spec_path is None and not args.length and Path(DRILL_SPEC_PATH).exists():
        spec_path = DRILL_SPEC_PATH
    if spec_path is not None:
        if not Path(spec_path).exists():
            raise FileNotFoundError(f"规格文件不存在: {spec_path}")
        with open(spec_path, "r", encoding="utf-8") as f:
            payload = json.load(f)

    if args.length:
        angles = args.angle or [2.0 * math.pi] * len(args.length)
        if len(angles) != len(args.length):
            raise ValueError("--angle 的个数必须与 --length 相同")
        payload["components"] = [{"length": L, "angle": a} for L, a in zip(args.length, angles)]
    if args.L0 is not None:
        payload["L0"] = args.L0
    payload.setdefault("L0", DEFAULT_L0)

    if args.reference_smooth_nehari:
        payload["K"] = SMOOTH_NEHARI_K
        payload["reference_K"] = True
    elif args.K is not None:
        payload["K"] = args.K
        payload["reference_K"] = False
    if "K" not in payload:
        raise ValueError("K 没有默认值: 请使用 --K 或 --reference-smooth-nehari")
    return ConeLocusSpec.model_validate(payload)


def cmd_drill_bound(args: argparse.Namespace) -> int:
    spec = build_spec(args)
    _progress(f"📋 {len(spec.components)} 个锥轴, 总长度 {spec.total_length:.6g}, K={spec.K}, L0={spec.L0}")
    report = assemble_report(spec, tolerance=args.tolerance)
    if report.banner:
        _progress(f"⚠️ {report.banner}")
    _emit(report_to_json(report), args.output)
    if not report.hypotheses_hold:
        _progress("⚠️ 假设检查未通过: 界已输出，但标记为未验证")
        return EXIT_FLAG_FAILURE
    _progress("✅ 所有假设检查通过")
    return EXIT_OK


def cmd_end_energy(args: argparse.Namespace) -> int:
    quad_diff, frame = load_frame_file(args.frame)
    _progress(f"🚀 计算端能量 t={args.t}")
    result = end_energy(quad_diff, frame, args.t, tol=args.tolerance)
    norm = qd_lp_norm(quad_diff, frame.metric, 2, frame.domain, tol=args.tolerance)
    lower = 8.0 * args.t ** 2 * norm ** 2
    payload = asdict(result)
    payload["l2_norm_squared"] = norm ** 2
    payload["lower_bound"] = lower
    payload["lower_bound_holds"] = bool(result.energy >= lower * (1.0 - 10.0 * args.tolerance))
    _emit(_json_text(payload), args.output)
    return EXIT_OK


def cmd_decay_fit(args: argparse.Namespace) -> int:
    quad_diff, frame = load_frame_file(args.frame)
    t_range = (args.t_min, args.t_max)
    if args.energy:
        _progress(f"🚀 拟合 ||delta omega||_t^2 在 t ∈ {t_range}")
        fit = delta_omega_energy_decay(quad_diff, frame, t_range, args.samples)
    else:
        z = complex(args.point[0], args.point[1])
        _progress(f"🚀 拟合 |delta omega|(z, t) 在 z={z}, t ∈ {t_range}")
        fit = delta_omega_decay(quad_diff, frame, z, t_range, args.samples)
    payload = asdict(fit)
    payload["reliable"] = fit.reliable
    _emit(_json_text(payload), args.output)
    if not fit.reliable:
        _progress("⚠️ 拟合残差过大，指数仅供参考")
    return EXIT_OK


def cmd_bending_norm(args: argparse.Namespace) -> int:
    lamination = load_lamination(args.lamination)
    window = Disk(complex(args.window[0], args.window[1]), args.window[2])
    _progress(f"📋 {len(lamination)} 条叶, L={args.L}")
    if args.check:
        result = bending_bound_check(lamination, args.L, window)
        estimate = result.estimate
        payload = {"norm": result.norm, "embedded_hint": result.embedded_hint, "consistent": result.consistent}
    else:
        estimate = bending_norm_search(lamination, args.L, window)
        payload = {"norm": estimate.value}
    payload["L"] = args.L
    payload["disclosure"] = estimate.disclosure
    payload["lower_bound"] = estimate.lower_bound
    _emit(_json_text(payload), args.output)
    return EXIT_OK


def constants_payload(L0: float = DEFAULT_L0) -> Dict[str, Any]:
    """η, 参考 c_drill, 弯曲长度常数, f/g 表和常数差异"""
    discrepancy = constant_discrepancy()
    radii = [0.25, 0.5, 1.0, math.asinh(math.sqrt(2.0)), 2.0, 4.0]
    return {
        "eta": eta(),
        "eta_squared": eta() ** 2,
        "c_drill_reference_K": c_drill(SMOOTH_NEHARI_K),
        "bending_length_constant": bending_length_constant(L0),
        "f_table": [[R, f_packing(R)] for R in radii],
        "g_table": [[r, g_floor(r, L0)] for r in radii],
        "constant_discrepancy": asdict(discrepancy),
        "L0": L0,
    }


def cmd_constants(args: argparse.Namespace) -> int:
    L0 = args.L0 if args.L0 is not None else DEFAULT_L0
    _emit(_json_text(constants_payload(L0)), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="钻孔界数值工具")
    parser.add_argument("--tolerance", type=float, default=QUAD_TOLERANCE, help="求积相对容差")
    parser.add_argument("--output", type=str, default=None, help="输出文件（默认 stdout）")
    parser.add_argument("--verbose", action="store_true", help="DEBUG 日志")
    sub = parser.add_subparsers(dest="command", required=True)

    bound = sub.add_parser("drill-bound", help="锥数据 -> 钻孔界报告")
    bound.add_argument("--spec", type=str, default=None, help="规格 JSON 文件")
    bound.add_argument("--length", type=float, action="append", default=[], help="锥轴长度（可重复）")
    bound.add_argument("--angle", type=float, action="append", default=[], help="锥角（可重复）")
    bound.add_argument("--K", type=float, default=None)
    bound.add_argument("--L0", type=float, default=None)
    bound.add_argument("--reference-smooth-nehari", action="store_true", help="插入 K=3/2（仅光滑情形参考）")
    bound.set_defaults(handler=cmd_drill_bound)

    energy = sub.add_parser("end-energy", help="端能量 ||omega_Phi||_t^2")
    energy.add_argument("--frame", type=str, required=True, help="frame JSON 文件")
    energy.add_argument("--t", type=float, required=True)
    energy.set_defaults(handler=cmd_end_energy)

    decay = sub.add_parser("decay-fit", help="delta omega 衰减指数拟合")
    decay.add_argument("--frame", type=str, required=True)
    decay.add_argument("--t-min", type=float, default=0.01)
    decay.add_argument("--t-max", type=float, default=0.1)
    decay.add_argument("--samples", type=int, default=None)
    decay.add_argument("--point", type=float, nargs=2, default=[0.1, 0.05])
    decay.add_argument("--energy", action="store_true", help="拟合能量而非逐点范数")
    decay.set_defaults(handler=cmd_decay_fit)

    bending = sub.add_parser("bending-norm", help="窗口内平均弯曲范数")
    bending.add_argument("--lamination", type=str, required=True)
    bending.add_argument("--L", type=float, default=BENDING_ARC_LENGTH)
    bending.add_argument("--window", type=float, nargs=3, default=[0.0, 0.0, 0.5], help="cx cy r")
    bending.add_argument("--check", action="store_true", help="同时运行嵌入性启发式")
    bending.set_defaults(handler=cmd_bending_norm)

    consts = sub.add_parser("constants", help="打印常数")
    consts.add_argument("--L0", type=float, default=None)
    consts.set_defaults(handler=cmd_constants)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.handler(args)
    except (QuadratureError, DerivativeError) as e:
        _progress(f"❌ 数值计算未收敛: {e}")
        return EXIT_NUMERICAL_FAILURE
    except (ValueError, FileNotFoundError, RuntimeError) as e:
        _progress(f"❌ 错误: {e}")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
