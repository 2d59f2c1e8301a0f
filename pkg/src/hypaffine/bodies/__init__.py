"""Convex bodies by support function, and static convex domains of H^n."""
