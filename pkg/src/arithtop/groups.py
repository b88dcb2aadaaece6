"""Finite groups given by multiplication tables.

Elements are the integers 0..n-1 with 0 the identity.  Constructors cover
the families the rest of the library needs: cyclic groups, products of
cyclic groups and the metacyclic 2-groups (dihedral, generalized
quaternion, semidihedral).
"""

import itertools
from math import gcd

from .abelian import is_prime


class GroupError(ValueError):
    pass


class GroupTable:
    """A finite group with an optional designated normal subgroup of index p.

    ``structure`` records how the table was built, e.g. ``("C", [4, 2])``
    for a product of cyclic groups; fast paths key off it.
    """

    def __init__(self, mult, name=None, structure=None, subgroup=None, check=True):
        self.mult = [list(row) for row in mult]
        self.order = len(self.mult)
        self.name = name or "G%d" % self.order
        self.structure = structure
        if check:
            self._check()
        self.inv = [0] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if self.mult[a][b] == 0:
                    self.inv[a] = b
                    break
        self.subgroup = None
        if subgroup is not None:
            self.subgroup = self.check_index_p_subgroup(subgroup)

    def _check(self):
        n = self.order
        M = self.mult
        if n == 0 or any(len(r) != n for r in M):
            raise GroupError("multiplication table must be square and nonempty")
        if any(sorted(r) != list(range(n)) for r in M):
            raise GroupError("rows of the table must be permutations")
        if any(sorted(M[a][b] for a in range(n)) != list(range(n)) for b in range(n)):
            raise GroupError("columns of the table must be permutations")
        if any(M[0][a] != a or M[a][0] != a for a in range(n)):
            raise GroupError("element 0 must be the identity")
        for a in range(n):
            for b in range(n):
                ab = M[a][b]
                for c in range(n):
                    if M[ab][c] != M[a][M[b][c]]:
                        raise GroupError("table is not associative")

    def __repr__(self):
        return "GroupTable(%s)" % self.name

    def mul(self, a, b):
        return self.mult[a][b]

    def power(self, a, k):
        x = 0
        for _ in range(k % self.elem_order(a)):
            x = self.mult[x][a]
        return x

    def elem_order(self, a):
        k, x = 1, a
        while x != 0:
            x = self.mult[x][a]
            k += 1
        return k

    def is_abelian(self):
        M = self.mult
        return all(M[a][b] == M[b][a] for a in range(self.order) for b in range(a))

    def generated(self, gens):
        """Sorted list of the elements of the subgroup generated by gens."""
        seen = {0}
        frontier = [0]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.mult[x][g]
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
            frontier = new
        return sorted(seen)

    def generators(self):
        """A small generating set, chosen greedily by element order."""
        order = sorted(range(1, self.order), key=lambda a: (-self.elem_order(a), a))
        gens = []
        span = [0]
        for a in order:
            if len(span) == self.order:
                break
            if a not in span:
                gens.append(a)
                span = self.generated(gens)
        return gens

    def is_p_group(self, p):
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    def is_subgroup(self, S):
        S = set(S)
        return 0 in S and all(self.mult[a][b] in S for a in S for b in S)

    def is_normal(self, S):
        S = set(S)
        return all(self.mult[self.mult[g][h]][self.inv[g]] in S
                   for g in range(self.order) for h in S)

    def check_index_p_subgroup(self, S):
        S = sorted(set(S))
        if not self.is_subgroup(S):
            raise GroupError("designated subset is not a subgroup")
        if self.order % len(S) or not is_prime(self.order // len(S)):
            raise GroupError("designated subgroup does not have prime index")
        if not self.is_normal(S):
            raise GroupError("designated subgroup is not normal")
        return S

    def commutator_subgroup(self):
        M, inv = self.mult, self.inv
        comms = {M[M[a][b]][M[inv[a]][inv[b]]] for a in range(self.order) for b in range(self.order)}
        return self.generated(sorted(comms))

    def abelianization_order(self):
        return self.order // len(self.commutator_subgroup())

    def homs_to_cyclic(self, p):
        """All homomorphisms G -> Z/p, as value lists indexed by element."""
        gens = self.generators()
        out = []
        for vals in itertools.product(range(p), repeat=len(gens)):
            phi = self._extend(dict(zip(gens, vals)), p)
            if phi is not None:
                out.append(phi)
        return out

    def _extend(self, assign, p):
        phi = [None] * self.order
        phi[0] = 0
        frontier = [0]
        while frontier:
            new = []
            for x in frontier:
                for g, v in assign.items():
                    y = self.mult[x][g]
                    val = (phi[x] + v) % p
                    if phi[y] is None:
                        phi[y] = val
                        new.append(y)
                    elif phi[y] != val:
                        return None
            frontier = new
        # a consistent labelling of the Cayley graph is a homomorphism
        for a in range(self.order):
            for b in range(self.order):
                if phi[self.mult[a][b]] != (phi[a] + phi[b]) % p:
                    return None
        return phi

    def index_p_subgroups(self, p):
        """Normal subgroups of index p, each as a sorted element list."""
        seen = set()
        out = []
        for phi in self.homs_to_cyclic(p):
            if any(phi):
                K = tuple(a for a in range(self.order) if phi[a] == 0)
                if K not in seen:
                    seen.add(K)
                    out.append(list(K))
        return out

    def character_for(self, K, p):
        """The homomorphism s : G -> Z/p with kernel K (one choice of scale)."""
        K = set(K)
        for phi in self.homs_to_cyclic(p):
            if any(phi) and {a for a in range(self.order) if phi[a] == 0} == K:
                return phi
        raise GroupError("no homomorphism onto Z/%d with this kernel" % p)

    def sub_table(self, S, name=None):
        """The subgroup S as a GroupTable, with the embedding list."""
        S = sorted(S)
        idx = {a: i for i, a in enumerate(S)}
        mult = [[idx[self.mult[a][b]] for b in S] for a in S]
        return GroupTable(mult, name=name or "%s<%d>" % (self.name, len(S)), check=False), S

    def with_subgroup(self, S):
        return GroupTable(self.mult, self.name, self.structure, subgroup=S, check=False)

    def right_coset_reps(self, S):
        """Representatives c of the right cosets S c, smallest element first;
        returns (reps, coset_index, h_part) with x = h_part[x] * reps[coset_index[x]]."""
        S = sorted(S)
        reps = []
        coset = [None] * self.order
        hpart = [None] * self.order
        for x in range(self.order):
            if coset[x] is None:
                c = x
                reps.append(c)
                for h in S:
                    y = self.mult[h][c]
                    coset[y] = len(reps) - 1
                    hpart[y] = h
        return reps, coset, hpart

    def to_json(self):
        if self.structure is not None:
            fam, data = self.structure
            if fam == "C":
                return {"family": "C", "orders": list(data)}
            return {"family": fam, "order": self.order}
        return {"order": self.order, "mult": self.mult}


def product_of_cyclics(orders):
    """Z/n_1 + ... + Z/n_k with mixed-radix element numbering."""
    orders = [int(n) for n in orders]
    if not orders or any(n < 1 for n in orders):
        raise GroupError("cyclic orders must be positive")
    elems = list(itertools.product(*[range(n) for n in orders]))
    # mixed radix, first factor most significant
    idx = {e: i for i, e in enumerate(elems)}
    mult = [[idx[tuple((a + b) % n for a, b, n in zip(x, y, orders))] for y in elems] for x in elems]
    name = "+".join("Z/%d" % n for n in orders)
    return GroupTable(mult, name=name, structure=("C", orders), check=False)


def cyclic(n):
    return product_of_cyclics([n])


def metacyclic(m, u, c, name=None, structure=None):
    """<a, b | a^m, b^2 = a^c, b a b^-1 = a^u>; element a^i b^j is 2i + j."""
    if (u * u) % m != 1 % m or (u * c - c) % m:
        raise GroupError("inconsistent metacyclic parameters")
    n = 2 * m

    def enc(i, j):
        return 2 * (i % m) + j

    mult = [[0] * n for _ in range(n)]
    for i in range(m):
        for j in range(2):
            for k in range(m):
                for l in range(2):
                    e = i + (u if j else 1) * k + (c if j + l == 2 else 0)
                    mult[enc(i, j)][enc(k, l)] = enc(e, (j + l) % 2)
    return GroupTable(mult, name=name, structure=structure, check=False)


def dihedral(order):
    if order < 4 or order % 2:
        raise GroupError("dihedral group order must be even and at least 4")
    m = order // 2
    return metacyclic(m, -1 % m, 0, "D%d" % order, ("D", order))


def quaternion(order):
    if order < 8 or order & (order - 1):
        raise GroupError("generalized quaternion order must be a power of 2, at least 8")
    m = order // 2
    return metacyclic(m, m - 1, m // 2, "Q%d" % order, ("Q", order))


def semidihedral(order):
    if order < 16 or order & (order - 1):
        raise GroupError("semidihedral order must be a power of 2, at least 16")
    m = order // 2
    return metacyclic(m, m // 2 - 1, 0, "SD%d" % order, ("SD", order))


def group_from_json(obj):
    """Parse {"order", "mult"} or a family literal such as {"family": "Q", "order": 16}."""
    if not isinstance(obj, dict):
        raise GroupError("group must be a JSON object")
    if "family" in obj:
        fam = obj["family"]
        if fam == "C":
            orders = obj.get("orders", [obj.get("order")])
            if any(not isinstance(n, int) for n in orders):
                raise GroupError("cyclic family needs integer orders")
            return product_of_cyclics(orders)
        if not isinstance(obj.get("order"), int):
            raise GroupError("family literal needs an integer order")
        makers = {"D": dihedral, "Q": quaternion, "SD": semidihedral}
        if fam not in makers:
            raise GroupError("unknown family %r" % fam)
        return makers[fam](obj["order"])
    if "mult" not in obj:
        raise GroupError("group needs either a family or a multiplication table")
    mult = obj["mult"]
    if obj.get("order") not in (None, len(mult)):
        raise GroupError("order does not match table size")
    return GroupTable(mult, name=obj.get("name"))


def adem_family():
    """(G, K) pairs over every index-2 subgroup of the standard test groups."""
    groups = [cyclic(n) for n in range(4, 33, 2)]
    groups += [product_of_cyclics([2, 2]), product_of_cyclics([4, 2]), product_of_cyclics([2, 2, 2])]
    groups += [dihedral(8), quaternion(8), quaternion(16), semidihedral(16)]
    return [(G, K) for G in groups for K in G.index_p_subgroups(2)]


def lcm(a, b):
    return a * b // gcd(a, b)
