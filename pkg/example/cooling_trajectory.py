"""
Cooling Trajectory Example

最適離調を η から解き、n_th から出発したフォノン数の時間発展を
レート方程式とモーメント方程式の両方で計算して表示するサンプル。

使用方法:
    python cooling_trajectory.py --eta 0.98 --gamma-m 2e-7 --n-th 300

任意の環境変数 (.env でも可):
    HYBRID_COOLING_KAPPA, HYBRID_COOLING_LAMBDA など CONFIG_KEYS の各キー
"""

import argparse

import numpy as np
from dotenv import load_dotenv

from hybrid_cooling import (
    LogLevel,
    ModelParams,
    build_generator,
    cooling_limit,
    evolution,
    evolve_exact,
    load_params,
    report,
    set_logger,
    solve_default,
    steady_state,
    thermal_initial,
)

load_dotenv()

BASELINE = ModelParams.model_validate(
    {
        "kappa": 5.0,
        "gamma": 15.0,
        "lambda": 0.02,
        "g_n": 5000.0,
        "omega_r": 60.0,
    }
)


def main() -> None:
    parser = argparse.ArgumentParser(description="hybrid cavity cooling trajectory")
    parser.add_argument("--eta", type=float, default=0.98)
    parser.add_argument("--gamma-m", type=float, default=2e-7)
    parser.add_argument("--n-th", type=float, default=300.0)
    parser.add_argument("--points", type=int, default=11)
    parser.add_argument("--debug", action="store_true")
    args = parser.parse_args()

    if args.debug:
        set_logger(level=LogLevel.DEBUG)

    # 環境変数の HYBRID_COOLING_* が BASELINE の値より優先される
    p = load_params(
        base=BASELINE,
        overrides={"eta": args.eta, "gamma_m": args.gamma_m, "n_th": args.n_th},
    )
    # モーメント方程式がレート方程式に従う最遠の正の根を使う
    solution = solve_default(p, options={"branch_policy": "farthest"})
    p = solution.apply(p)
    print(
        f"branch {solution.branch}: delta_g={p.delta_g:.6g} "
        f"delta_gr={p.delta_gr:.6g} delta_c={p.delta_c:.6g}"
    )

    r = report(p)
    print(f"A+={r.a_plus:.4e} A-={r.a_minus:.4e} W={r.w:.4e}")
    print(f"n_ss={r.n_ss:.4e} (limit {cooling_limit(p):.4e})")

    # 10/W まで等間隔にサンプル
    t_grid = np.linspace(0.0, 10.0 / r.w, args.points)
    gen = build_generator(p)
    numeric = evolve_exact(gen, thermal_initial(p), t_grid).phonon
    theory = evolution(p, t_grid)

    print(f"{'t':>12s} {'numeric':>12s} {'theory':>12s}")
    for t, n_num, n_th in zip(t_grid, numeric, theory):
        print(f"{t:12.4e} {n_num:12.4e} {n_th:12.4e}")

    print(f"moment steady state: {steady_state(gen).phonon:.4e}")


if __name__ == "__main__":
    main()
