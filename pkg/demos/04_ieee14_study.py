"""Scaling up: four grid-forming converters on the modified 14-bus system.

Three variants ship: a healthy dispatch, a detuned one where converter 8
runs nearly undamped in constant-Q mode behind weakened tie lines (the
closed loop is genuinely unstable), and a retuned one where converter 8
borrows converter 6's settings. The decentralized certificate localizes
the problem: every failing frequency names converter 8, without ever
forming the interconnected model.
"""

from phasecert import certify, ground_truth
from phasecert.scenario import assemble_scenario, load_scenario

for name in ("ieee14_stable", "ieee14_detuned", "ieee14_retuned"):
    asm = assemble_scenario(load_scenario(name))
    gt = ground_truth(asm.conv_models, asm.network)
    rep = certify(asm.conv_models, asm.buses, asm.network, asm.transform_set(),
                  asm.grid(), scenario=name)
    fails = rep.failures()
    print(f"{name}")
    mode = f", dominant mode {gt.dominant_mode_hz:.3f} Hz" if gt.dominant_mode_hz else ""
    print(f"  ground truth : {'stable' if gt.stable else 'UNSTABLE'}"
          f" (max Re = {gt.max_real:+.3f}{mode})")
    print(f"  certificate  : {'granted' if rep.certified else 'not granted'}"
          f" ({len(fails)} failing frequencies)")
    if fails:
        lims = sorted({v.limiting_converter for v in fails})
        band = (min(v.f_hz for v in fails), max(v.f_hz for v in fails))
        print(f"  failing band : {band[0]:.3g}..{band[1]:.3g} Hz,"
              f" limiting converter(s): {lims}")
    print()

print("a failed certificate is not an instability proof, but here it points"
      "\nat the right unit: retuning converter 8 alone recovers both the"
      "\ncertificate and true stability.")
