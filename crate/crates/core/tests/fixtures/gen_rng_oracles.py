"""Independent reference for the seeded generator, shuffle and topic pick.

splitmix64 -> Lemire bounded draw with rejection -> Fisher-Yates from the top
index down; an identity result for n >= 2 gets its first two entries swapped.
Prints the golden values frozen into the Rust tests.
"""

import json

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def next_below(self, bound):
        x = self.next_u64()
        m = x * bound
        low = m & MASK
        if low < bound:
            threshold = ((1 << 64) - bound) % bound
            while low < threshold:
                x = self.next_u64()
                m = x * bound
                low = m & MASK
        return m >> 64


def shuffle(n, seed):
    rng = SplitMix64(seed)
    order = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.next_below(i + 1)
        order[i], order[j] = order[j], order[i]
    if n >= 2 and order == list(range(n)):
        order[0], order[1] = order[1], order[0]
    return order


def topics():
    with open("../../data/surprise_topics.txt", encoding="utf-8") as fh:
        return [l.strip() for l in fh if l.strip() and not l.strip().startswith("#")]


if __name__ == "__main__":
    first = SplitMix64(0)
    print("splitmix64(0) first three:", [hex(first.next_u64()) for _ in range(3)])
    print("shuffle(5, 42):", shuffle(5, 42))
    print("shuffle(10, 7):", shuffle(10, 7))
    print("shuffle(6, 0):", shuffle(6, 0))
    t = topics()
    print("topics:", len(t))
    print("surprise(seed 7):", json.dumps(t[SplitMix64(7).next_below(len(t))]))
    print("surprise(seed 0):", json.dumps(t[SplitMix64(0).next_below(len(t))]))
