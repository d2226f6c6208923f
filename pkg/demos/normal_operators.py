"""Normal generators: the criterion holds and the height decays log-convexly."""
import numpy as np

from logdecay import classify, gallery, short_time_check, trajectory_scan

for seed in range(3):
    A = gallery("normal_random", dim=5, seed=seed)
    rep = classify(A)
    print(f"seed {seed}: m={rep.numerical_abscissa:.6f} sigma={rep.spectral_abscissa:.6f} "
          f"equal={rep.abscissa_equal} min gap={rep.criterion_min_gap:.2e}")

A = gallery("normal_random", dim=5, seed=0)
u0 = np.ones(5) / np.sqrt(5)
tr = trajectory_scan(A, u0)
print("flags:", tr.flags())
print("min h h'' - h'^2:", tr.min_logconvexity_gap)

# h'(0) = -Re<Au0,u0>, and it never exceeds -m(A)
st = short_time_check(A, u0)
print(f"h'(0) closed form {st.h_prime_closed:.8f}, finite difference {st.h_prime_fd:.8f}, -m(A) {st.minus_m:.8f}")

# A shifted rotation has complex spectrum, yet |u(t)| never oscillates.
R = gallery("rotation_shift", omega=5.0, sigma=1.0)
tr = trajectory_scan(R, [1.0, 0.0])
print("rotation + shift strictly decreasing:", tr.strictly_decreasing)
