"""The four coupling-map families and smallest-fit selection.

Run: python demos/topologies.py
"""
from circuitbench import heavy_hex, linear, load_device, smallest_fit, square
from circuitbench.harness import DEFAULT_DEVICE_FILE
from circuitbench.topology import all_to_all, heavy_hex_num_nodes

for n in (1, 5, 12):
    print(f"linear({n}):     {len(linear(n).edges)} edges")
print(f"all_to_all(6):  {len(all_to_all(6).edges)} edges (n(n-1)/2)")
print(f"square(3,4):    {len(square(3, 4).edges)} edges, degrees {sorted(set(square(3,4).degrees()))}")

print("\nheavy-hex lattice sizes, (5d^2-2d-1)/2:")
for d in (3, 5, 7, 9):
    cm = heavy_hex(d)
    assert cm.num_nodes == heavy_hex_num_nodes(d)
    print(f"  d={d}: {cm.num_nodes} nodes, max degree {max(cm.degrees())}, connected={cm.is_connected()}")

print("\nsmallest family member fitting a circuit width:")
for width in (5, 20, 100):
    for family in ("linear", "all_to_all", "square", "heavy_hex"):
        cm = smallest_fit(family, width)
        print(f"  width {width:>3} on {family:<10} -> {cm.num_nodes} nodes")
    print()

device = load_device(DEFAULT_DEVICE_FILE)
print(f"bundled device '{device.name}': {device.coupling.num_nodes} qubits, "
      f"{len(device.coupling.edges)} couplers, rep_delay {device.rep_delay*1e6:.0f} us")
print("gate durations:", {k: f"{v*1e9:.0f} ns" for k, v in device.gate_durations.items()})
