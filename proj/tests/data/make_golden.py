"""Regenerates golden_subblocks.txt from the two N=4 reference tables (BPSK, bit 0 -> +1)."""

TABLES = {
    (4, 2): [(1, 3), (2, 4), (1, 4), (2, 3)],
    (4, 3): [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)],
}


def main():
    lines = ["# N K hexbits : subblock entries re,im separated by ';' (BPSK, bits MSB first)"]
    for (n, k), rows in TABLES.items():
        width = 2 + k
        for value in range(1 << width):
            bits = [(value >> (width - 1 - i)) & 1 for i in range(width)]
            indices = rows[bits[0] * 2 + bits[1]]
            entries = [0.0] * n
            for pos, b in zip(indices, bits[2:]):
                entries[pos - 1] = -1.0 if b else 1.0
            body = ";".join(f"{e:g},0" for e in entries)
            lines.append(f"{n} {k} {value:x} : {body}")
    with open("golden_subblocks.txt", "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
