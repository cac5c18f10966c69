#!/usr/bin/env python3
"""Builds the pcap fixtures and their expected decodings.

Packets are assembled byte by byte with struct so the expectations do not
depend on the C++ reader. Re-run to regenerate:

    python3 tests/fixtures/make_pcap.py tests/fixtures
"""

import json
import struct
import sys
from pathlib import Path

ETH_IPV4 = 0x0800
ETH_IPV6 = 0x86DD
ETH_VLAN = 0x8100

QTYPES = {1: "A", 2: "NS", 6: "SOA", 12: "PTR", 15: "MX", 16: "TXT", 28: "AAAA",
          33: "SRV", 43: "DS", 48: "DNSKEY"}
QCLASSES = {1: "IN", 2: "CS", 3: "CH", 4: "HS", 254: "NONE", 255: "ANY"}


def presentation(labels):
    if not labels:
        return "."
    out = []
    for label in labels:
        for b in label:
            if b in (0x2E, 0x5C):
                out.append("\\" + chr(b))
            elif b < 0x21 or b > 0x7E:
                out.append("\\%03d" % b)
            else:
                out.append(chr(b))
        out.append(".")
    return "".join(out)


def wire_name(labels):
    return b"".join(bytes([len(l)]) + l for l in labels) + b"\x00"


def dns_query(labels, qtype, qclass=1, qid=0x1234, qr=0, qdcount=1, raw_name=None):
    flags = (0x8000 if qr else 0) | 0x0100
    header = struct.pack("!HHHHHH", qid, flags, qdcount, 0, 0, 0)
    name = raw_name if raw_name is not None else wire_name(labels)
    return header + name + struct.pack("!HH", qtype, qclass)


def checksum(data):
    if len(data) % 2:
        data += b"\x00"
    s = sum(struct.unpack("!%dH" % (len(data) // 2), data))
    while s >> 16:
        s = (s & 0xFFFF) + (s >> 16)
    return ~s & 0xFFFF


def udp(payload, sport=40000, dport=53):
    return struct.pack("!HHHH", sport, dport, 8 + len(payload), 0) + payload


def tcp(payload, sport=40000, dport=53):
    hdr = struct.pack("!HHIIBBHHH", sport, dport, 1, 0, 5 << 4, 0x18, 65535, 0, 0)
    return hdr + struct.pack("!H", len(payload)) + payload


def ipv4(src, dst, proto, payload, options=b"", frag=0):
    ihl = 5 + len(options) // 4
    total = ihl * 4 + len(payload)
    hdr = struct.pack("!BBHHHBBH4s4s", (4 << 4) | ihl, 0, total, 1, frag, 64, proto, 0,
                      bytes(src), bytes(dst)) + options
    hdr = hdr[:10] + struct.pack("!H", checksum(hdr)) + hdr[12:]
    return hdr + payload


def ipv6(src, dst, nh, payload, ext=b""):
    first_nh = nh
    if ext:
        first_nh = 60  # destination options
        ext = bytes([nh]) + ext[1:]
    return struct.pack("!IHBB16s16s", 6 << 28, len(ext) + len(payload), first_nh, 64,
                       bytes(src), bytes(dst)) + ext + payload


def ether(ethertype, payload, vlan=None):
    hdr = b"\x00\x11\x22\x33\x44\x55" + b"\x66\x77\x88\x99\xaa\xbb"
    if vlan is not None:
        hdr += struct.pack("!HH", ETH_VLAN, vlan)
    return hdr + struct.pack("!H", ethertype) + payload


def v4(text):
    return [int(x) for x in text.split(".")]


def v6(groups):
    out = []
    for g in groups:
        out += [g >> 8, g & 0xFF]
    return out


def v6_text(groups):
    # canonical RFC 5952 form for the specific addresses used below
    import ipaddress
    return str(ipaddress.IPv6Address(bytes(v6(groups))))


def write_pcap(path, linktype, packets, big_endian=False, nanos=False):
    e = ">" if big_endian else "<"
    magic = 0xA1B23C4D if nanos else 0xA1B2C3D4
    with open(path, "wb") as f:
        f.write(struct.pack(e + "IHHiIII", magic, 2, 4, 0, 0, 65535, linktype))
        for ts_sec, ts_frac, frame in packets:
            f.write(struct.pack(e + "IIII", ts_sec, ts_frac, len(frame), len(frame)))
            f.write(frame)


ROOT_V4 = v4("199.9.14.201")
ROOT_V6 = v6([0x2001, 0x500, 0x200, 0, 0, 0, 0, 0xB])


def build_acceptance(outdir):
    """50 Ethernet frames: 48 UDP/53 queries, one response, one TCP query."""
    base = 1649721600  # 2022-04-12T00:00:00Z
    names = [
        ([], 2),
        ([b"com"], 2),
        ([b"www", b"example", b"com"], 1),
        ([b"daozjwend"], 1),
        ([b"foobar"], 1),
        ([b"foo", b"12345"], 28),
        ([b"host", b"internal"], 1),
        ([b"qwertyuiop", b"com"], 1),
        ([b"foo", b"\xff\x01"], 1),
        ([b"a.b", b"example", b"net"], 1),
        ([b"back\\slash", b"org"], 16),
        ([b"with space", b"lan"], 1),
        ([b"tab\there", b"home"], 12),
        ([b"WWW", b"Example", b"COM"], 28),
        ([b"printer1", b"appletalk"], 33),
        ([b"_ldap", b"_tcp", b"corp"], 33),
        ([b"x" * 63, b"com"], 1),
        ([b"1", b"0", b"168", b"192", b"in-addr", b"arpa"], 12),
        ([b"networks"], 2),
        ([b"network"], 2),
        ([b"\x00\x7f\x80", b"com"], 1),
        ([b"xn--p1ai"], 2),
        ([b"example", b"xn--p1ai"], 1),
        ([b"abcdefg", b"local"], 1),
        ([], 48),
    ]
    packets = []
    expected = []
    for i in range(48):
        labels, qtype = names[i % len(names)]
        if i == 30:
            qtype = 65280
        qclass = 3 if i == 31 else 1
        payload = dns_query(labels, qtype, qclass, qid=i)
        ts_sec, ts_us = base + i * 37, (i * 123457) % 1000000
        if i % 3 == 0:
            src = v6([0x2001, 0xDB8, i, 0, 0, 0, 0, 1])
            frame = ether(ETH_IPV6, ipv6(src, ROOT_V6, 17, udp(payload),
                                         ext=(b"\x00\x00" + b"\x01\x04\x00\x00\x00\x00") if i == 9 else b""))
            src_text = v6_text([0x2001, 0xDB8, i, 0, 0, 0, 0, 1])
        else:
            src = [44, 242, i, 7] if i % 2 else [34, 223, 1, i]
            options = b"\x01\x01\x01\x00" if i == 10 else b""
            frame = ether(ETH_IPV4, ipv4(src, ROOT_V4, 17, udp(payload), options=options),
                          vlan=100 if i % 5 == 0 else None)
            src_text = ".".join(str(x) for x in src)
        packets.append((ts_sec, ts_us, frame))
        expected.append("%d\t%s\t%s\t%s\t%s" % (
            ts_sec * 1000000 + ts_us, src_text,
            QCLASSES.get(qclass, "CLASS%d" % qclass),
            QTYPES.get(qtype, "TYPE%d" % qtype), presentation(labels)))

    # one response (QR=1) and one TCP query: both skipped
    resp = dns_query([b"com"], 2, qid=999, qr=1)
    packets.insert(17, (base + 5000, 0, ether(ETH_IPV4, ipv4([8, 8, 8, 8], ROOT_V4, 17, udp(resp)))))
    tq = dns_query([b"example", b"com"], 1, qid=1000)
    packets.insert(33, (base + 6000, 0, ether(ETH_IPV4, ipv4([9, 9, 9, 9], ROOT_V4, 6, tcp(tq)))))
    assert len(packets) == 50

    write_pcap(outdir / "acceptance.pcap", 1, packets)
    (outdir / "acceptance_expected.tsv").write_text("\n".join(expected) + "\n")


def build_edge_cases(outdir):
    """Raw-IP, big-endian, nanosecond capture with malformed queries."""
    base = 1649743200
    src = v4("10.1.2.3")
    good = dns_query([b"com"], 2)
    cases = [
        ("query", ipv4(src, ROOT_V4, 17, udp(good))),
        ("query", ipv6(v6([0x2a00, 0x1450, 0, 0, 0, 0, 0, 5]), ROOT_V6, 17,
                       udp(dns_query([], 2)))),
        # compression pointer inside the question
        ("dropped", ipv4(src, ROOT_V4, 17,
                         udp(dns_query(None, 1, raw_name=b"\x03www\xc0\x0c")))),
        # DNS header shorter than 12 bytes
        ("dropped", ipv4(src, ROOT_V4, 17, udp(b"\x00\x01\x01\x00\x00"))),
        # QDCOUNT = 0
        ("dropped", ipv4(src, ROOT_V4, 17, udp(dns_query([b"com"], 2, qdcount=0)))),
        # name runs off the end of the packet
        ("dropped", ipv4(src, ROOT_V4, 17, udp(dns_query([b"com"], 2)[:15]))),
        # not port 53
        ("skipped", ipv4(src, ROOT_V4, 17, udp(good, dport=5353))),
        # non-first IPv4 fragment
        ("skipped", ipv4(src, ROOT_V4, 17, udp(good), frag=0x0010)),
        # ICMP
        ("skipped", ipv4(src, ROOT_V4, 1, b"\x08\x00\x00\x00\x00\x00\x00\x00")),
    ]
    packets = []
    records = []
    for i, (kind, frame) in enumerate(cases):
        ts_sec, ts_ns = base + i, 123456789 + i
        packets.append((ts_sec, ts_ns, frame))
        if kind == "query":
            records.append(ts_sec * 1000000 + ts_ns // 1000)
    write_pcap(outdir / "edge_raw_be_ns.pcap", 101, packets, big_endian=True, nanos=True)
    expected = {
        "timestamps_us": records,
        "records_emitted": 2,
        "records_dropped_unparseable": 4,
        "packets_skipped": 3,
        "qnames": ["com.", "."],
        "sources": ["10.1.2.3", "2a00:1450::5"],
    }
    (outdir / "edge_raw_be_ns.json").write_text(json.dumps(expected, indent=2) + "\n")


def build_single(outdir):
    """One Ethernet/IPv4/UDP query for "com." type NS."""
    frame = ether(ETH_IPV4, ipv4(v4("192.0.2.1"), ROOT_V4, 17, udp(dns_query([b"com"], 2))))
    write_pcap(outdir / "single_com_ns.pcap", 1, [(1649721600, 500000, frame)])


def main():
    outdir = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent)
    outdir.mkdir(parents=True, exist_ok=True)
    build_acceptance(outdir)
    build_edge_cases(outdir)
    build_single(outdir)


if __name__ == "__main__":
    main()
