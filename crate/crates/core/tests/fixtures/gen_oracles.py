"""Regenerates the frozen oracle fixtures used by the Rust test suites.

Every expected value here comes from CPython's own `tokenize` module, which is
independent of the Rust scanner under test. Run from this directory:

    python3 gen_oracles.py

and commit the resulting JSON files.
"""

import io
import json
import tokenize

COMMENT_CORPUS = [
    "x = 1  # init",
    "s = '# not a comment'",
    "# whole line\ny = 2",
    's = "# also not a comment"  # but this is',
    "s = 'it\\'s # still string'  # real",
    's = "say \\"hi\\" # inside"  # outside',
    "s = '''triple # inside'''  # after",
    's = """triple\n# still inside\n"""  # gone',
    'def f():\n    """Docstring with # hash."""\n    return 1  # one',
    "a = '#'  # hash literal",
    "b = \"#\" + '#'  # two hashes",
    "c = 'a' 'b'  # implicit concat",
    "url = 'http://x.org/#anchor'",
    "d = {'#': 1}  # dict with hash key",
    "print('#', end='')  # print hash",
    "x = 1\n# comment\n# another\ny = 2",
    "    # indented comment\nz = 3",
    "n = 5 # no space before hash",
    "t = r'raw \\# string'  # raw",
    "u = r\"\\\\\"  # backslash at end of raw",
    "v = '\\\\'  # escaped backslash then comment",
    "w = \"\\\\\\\"#\"  # escaped backslash and quote",
    "f = f'{x} # in fstring'  # after fstring",
    "g = b'# bytes'  # bytes",
    "h = '''a\nb # c\nd'''",
    'i = """\n"# nested quote"\n"""  # end',
    "j = \"it's # fine\"  # apostrophe in double",
    "k = 'say \"# ok\"'  # double in single",
    "for i in range(3):  # loop\n    print(i)  # body",
    "if x == '#':  # compare\n    pass",
    "items = [\n    1,  # first\n    2,  # second\n]",
    "m = (\n    'a'  # a\n    'b'  # b\n)",
    "s = ''  # empty string",
    's = ""  # empty double',
    "s = ''''''  # empty triple",
    "s = '\\n# not' # newline escape",
    "x = 1#tight",
    "#!/usr/bin/env python\nprint(1)",
    "# -*- coding: utf-8 -*-\nx = 1",
    "total = 0  # running total\nfor n in [1, 2]:\n    total += n  # add",
    "def area(r):\n    # compute\n    return 3.14 * r * r  # pi r^2",
    "s = 'a\\\\'  # trailing escaped backslash",
    "q = \"'''\"  # triple single inside double",
    "p = '\"\"\"'  # triple double inside single",
    "text = \"\"\"He said 'hi' # and \"left\" \"\"\"  # done",
    "x = 'one' # c1\ny = \"two\" # c2\nz = '''three''' # c3",
    "names = ['#a', \"#b\", '''#c''']  # list",
    "print(f\"{name}: #{count}\")  # format",
    "class Pet:\n    '''A pet. # not comment'''\n    sound = 'woof'  # default",
    "value = 10  #   many spaces   ",
]

BANNED_CORPUS = [
    "while True:\n    x += 1",
    "for i in range(3):\n    print(i)",
    "msg = 'take a break'",
    "for i in range(9):\n    if i == 3:\n        break",
    "try:\n    x = 1\nexcept ValueError:\n    x = 2\nfinally:\n    y = 3",
    "breakfast = 'eggs'\nprint(breakfast)",
    "while (True):\n    pass",
    "while x < 3:\n    x += 1",
    "s = \"while True: break\"",
    "trying = 1\nexcepted = 2\nfinally_done = 3",
    "while True and x:\n    pass",
    "while ((True)):\n    x -= 1",
    "text = '''\ntry:\n    break\n'''\nprint(text)",
    "x = True\nwhile x:\n    x = False",
]

INDENT_CORPUS = [
    "def f():\n    return 1",
    "a = 1\n\nb = 2",
    "if x:\n  y = 1\n  if y:\n    z = 2",
    "for i in range(3):\n    if i:\n        print(i)\n    else:\n        print(0)\nprint('done')",
    "def g(n):\n   total = 0\n   for k in range(n):\n      total += k\n   return total",
]


def tokens(src):
    return list(tokenize.generate_tokens(io.StringIO(src + "\n").readline))


def strip_comments_oracle(src):
    lines = src.split("\n")
    for tok in tokens(src):
        if tok.type == tokenize.COMMENT:
            row, col = tok.start
            line = lines[row - 1]
            lines[row - 1] = line[:col]
    return "\n".join(l.rstrip() for l in lines)


def banned_oracle(src):
    toks = [t for t in tokens(src) if t.type in (tokenize.NAME, tokenize.OP, tokenize.STRING, tokenize.NUMBER)]
    found = []
    for i, t in enumerate(toks):
        if t.type != tokenize.NAME:
            continue
        line = t.start[0] - 1
        if t.string == "while":
            j = i + 1
            while j < len(toks) and toks[j].type == tokenize.OP and toks[j].string == "(":
                j += 1
            if j < len(toks) and toks[j].type == tokenize.NAME and toks[j].string == "True":
                found.append(["WhileTrue", line])
        elif t.string == "break":
            found.append(["Break", line])
        elif t.string in ("try", "except", "finally"):
            found.append(["TryExcept", line])
    return found


def indent_oracle(src):
    """Indent level of every non-blank line, from the INDENT/DEDENT stack."""
    levels = {}
    depth = 0
    for tok in tokens(src):
        if tok.type == tokenize.INDENT:
            depth += 1
        elif tok.type == tokenize.DEDENT:
            depth -= 1
        elif tok.type not in (tokenize.NL, tokenize.NEWLINE, tokenize.ENDMARKER, tokenize.COMMENT):
            levels.setdefault(tok.start[0] - 1, depth)
    return [levels[k] for k in sorted(levels)]


def main():
    assert len(COMMENT_CORPUS) == 50, len(COMMENT_CORPUS)
    with open("comment_corpus.json", "w") as fh:
        json.dump([{"input": s, "expected": strip_comments_oracle(s)} for s in COMMENT_CORPUS], fh, indent=1)
        fh.write("\n")
    with open("banned_corpus.json", "w") as fh:
        json.dump([{"input": s, "expected": banned_oracle(s)} for s in BANNED_CORPUS], fh, indent=1)
        fh.write("\n")
    with open("indent_corpus.json", "w") as fh:
        json.dump([{"input": s, "levels": indent_oracle(s)} for s in INDENT_CORPUS], fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main()
