"""Tagged cell values.

Every shared-memory cell holds one of these plain-tuple values.  Tuples keep
equality/hashing trivial, which the state fingerprinting relies on.

Tags:
  ("nil",)        -- null pointer
  ("node", base)  -- address of a queue-node block (base cell id)
  ("b", 0|1)      -- boolean
  ("sig", 0|1)    -- signal state, 1 = present
  ("i", n)        -- small integer
  ("ref", cid)    -- address of a single cell
"""

NIL = ("nil",)
TRUE = ("b", 1)
FALSE = ("b", 0)
PRESENT = ("sig", 1)
ABSENT = ("sig", 0)


def node(base):
    return ("node", base)


def ref(cid):
    return ("ref", cid)


def intv(n):
    return ("i", n)


def is_node(v):
    return v[0] == "node"
