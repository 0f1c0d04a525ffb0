"""
Discord as a dense-coding advantage
===================================

Send half of |Phi_2> through depolarizing noise, with or without first
dephasing B. The gap between the two dense-coding capacities equals the
Zurek discord of the noisy quantum state, and the state stops being
entangled at mu = 1/3.
"""

from opq.protocols import dense_coding_sweep, entanglement_threshold, grid

print("  mu     F_q       F_c       gap       Q_z       min eig(rho^T_B)")
for row in dense_coding_sweep(grid(0, 1, 0.1)):
    print(
        f"{row.mu:5.2f}  {row.F_q:8.5f}  {row.F_c:8.5f}  {row.discord_gap:8.5f}  {row.q_z:8.5f}"
        f"  {row.ppt_min_eigenvalue:9.5f}"
    )

print(f"\nentanglement is lost at mu = {entanglement_threshold():.10f}")
