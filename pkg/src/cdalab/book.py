"""Continuous double auction order book.

Prices and volumes are integer counts of the minimum denomination
(1 unit = 1e-8 of the base currency), so all matching and volume
accounting is exact integer arithmetic. The value of a fill is
``price * quantity`` units, where ``price`` is units of base currency
per coin unit and ``quantity`` is coin units.

Matching is price-time priority (FIFO within a price level); every fill
executes at the resting (maker) order's price. Market orders are
immediate-or-cancel: they consume opposite-side liquidity and discard
any unfilled remainder.
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Optional, TextIO


class Side(enum.Enum):
    BUY = "B"
    SELL = "S"

    def opposite(self) -> "Side":
        return Side.SELL if self is Side.BUY else Side.BUY


class PriceImpact(enum.Enum):
    RAISED = "raised"
    LOWERED = "lowered"
    UNCHANGED = "unchanged"


class OrderRejected(ValueError):
    """Order violates book-level constraints."""


class BelowMinimumSize(OrderRejected):
    """Total order value is below the market's minimum order size."""


class NoLiquidity(Exception):
    """Market order submitted against an empty opposite side."""


@dataclass(slots=True)
class Order:
    id: int
    coin: str
    side: Side
    price: int
    quantity: int
    timestamp: int
    owner: int

    @property
    def value(self) -> int:
        return self.price * self.quantity


@dataclass(slots=True, frozen=True)
class Trade:
    coin: str
    price: int
    quantity: int
    taker_side: Side
    timestamp: int
    maker_order_id: int
    taker_owner: int
    maker_owner: int

    @property
    def value(self) -> int:
        return self.price * self.quantity


# Resting entries are mutable lists for cheap partial fills:
# [price, seq, quantity, order_id, owner, timestamp]
_PRICE, _SEQ, _QTY, _OID, _OWNER, _TS = range(6)


class OrderBook:
    """One coin's open orders plus its append-only trade history."""

    __slots__ = (
        "coin",
        "min_order_value",
        "trade_history",
        "_bids",
        "_asks",
        "_bid_keys",
        "_ask_keys",
        "_seq",
    )

    def __init__(self, coin: str, min_order_value: int = 10):
        self.coin = coin
        self.min_order_value = min_order_value
        self.trade_history: list[Trade] = []
        self._bids: list[list] = []  # sorted by (-price, seq)
        self._asks: list[list] = []  # sorted by (price, seq)
        self._bid_keys: list[tuple[int, int]] = []
        self._ask_keys: list[tuple[int, int]] = []
        self._seq = 0

    # -- top of book -------------------------------------------------

    def best_bid(self) -> Optional[int]:
        return self._bids[0][_PRICE] if self._bids else None

    def best_ask(self) -> Optional[int]:
        return self._asks[0][_PRICE] if self._asks else None

    def last_price(self) -> Optional[int]:
        return self.trade_history[-1].price if self.trade_history else None

    def last_trade(self) -> Optional[Trade]:
        return self.trade_history[-1] if self.trade_history else None

    def depth(self, side: Side) -> int:
        return len(self._bids) if side is Side.BUY else len(self._asks)

    def open_orders(self, side: Side) -> list[Order]:
        """Value-copied view of one side, best first."""
        entries = self._bids if side is Side.BUY else self._asks
        return [
            Order(e[_OID], self.coin, side, e[_PRICE], e[_QTY], e[_TS], e[_OWNER])
            for e in entries
        ]

    # -- order entry -------------------------------------------------

    def place_limit_order(self, order: Order) -> list[Trade]:
        """Match greedily in price-time priority; rest the remainder.

        Raises OrderRejected for non-positive quantity or price, and
        BelowMinimumSize when price * quantity is under the market
        minimum.
        """
        if order.quantity <= 0:
            raise OrderRejected(f"non-positive quantity {order.quantity}")
        if order.price <= 0:
            raise OrderRejected(f"non-positive price {order.price}")
        if order.price * order.quantity < self.min_order_value:
            raise BelowMinimumSize(
                f"order value {order.price * order.quantity} below minimum "
                f"{self.min_order_value}"
            )

        is_buy = order.side is Side.BUY
        before = len(self.trade_history)
        remaining = self._match(
            is_buy, order.quantity, order.price, order.owner, order.timestamp
        )
        if remaining > 0:
            self._rest(order, remaining)
        return self.trade_history[before:]

    def place_market_order(
        self, side: Side, quantity: int, owner: int, timestamp: int
    ) -> list[Trade]:
        """Immediate-or-cancel: fill up to `quantity`, discard the rest.

        Raises NoLiquidity when the opposite side is empty, and
        OrderRejected for non-positive quantity.
        """
        if quantity <= 0:
            raise OrderRejected(f"non-positive quantity {quantity}")
        is_buy = side is Side.BUY
        opposite = self._asks if is_buy else self._bids
        if not opposite:
            raise NoLiquidity(f"no {'asks' if is_buy else 'bids'} open on {self.coin}")
        before = len(self.trade_history)
        self._match(is_buy, quantity, None, owner, timestamp)
        return self.trade_history[before:]

    # -- internals ---------------------------------------------------

    def _match(
        self,
        is_buy: bool,
        quantity: int,
        limit_price: Optional[int],
        taker_owner: int,
        timestamp: int,
    ) -> int:
        opposite = self._asks if is_buy else self._bids
        keys = self._ask_keys if is_buy else self._bid_keys
        taker_side = Side.BUY if is_buy else Side.SELL
        history = self.trade_history
        coin = self.coin
        while quantity > 0 and opposite:
            best = opposite[0]
            price = best[_PRICE]
            if limit_price is not None:
                if is_buy:
                    if price > limit_price:
                        break
                elif price < limit_price:
                    break
            fill = best[_QTY] if best[_QTY] < quantity else quantity
            history.append(
                Trade(
                    coin,
                    price,
                    fill,
                    taker_side,
                    timestamp,
                    best[_OID],
                    taker_owner,
                    best[_OWNER],
                )
            )
            quantity -= fill
            if fill == best[_QTY]:
                del opposite[0]
                del keys[0]
            else:
                best[_QTY] -= fill
        return quantity

    def _rest(self, order: Order, quantity: int) -> None:
        self._seq += 1
        seq = self._seq
        entry = [order.price, seq, quantity, order.id, order.owner, order.timestamp]
        if order.side is Side.BUY:
            key = (-order.price, seq)
            pos = bisect_right(self._bid_keys, key)
            self._bid_keys.insert(pos, key)
            self._bids.insert(pos, entry)
        else:
            key = (order.price, seq)
            pos = bisect_right(self._ask_keys, key)
            self._ask_keys.insert(pos, key)
            self._asks.insert(pos, entry)

    def prune_worst(self, max_depth: int) -> list[tuple[int, Side, int, int]]:
        """Drop worst-priced resting orders beyond `max_depth` per side.

        Simulation-side liquidity cap (books never shrink otherwise since
        cancellation is out of scope). Returns (owner, side, quantity,
        price) for each dropped order so callers can release escrow.
        """
        dropped: list[tuple[int, Side, int, int]] = []
        for side, entries, keys in (
            (Side.BUY, self._bids, self._bid_keys),
            (Side.SELL, self._asks, self._ask_keys),
        ):
            while len(entries) > max_depth:
                e = entries.pop()
                keys.pop()
                dropped.append((e[_OWNER], side, e[_QTY], e[_PRICE]))
        return dropped

    def assert_uncrossed(self) -> None:
        if self._bids and self._asks:
            if self._bids[0][_PRICE] >= self._asks[0][_PRICE]:
                raise AssertionError(
                    f"crossed book on {self.coin}: "
                    f"bid {self._bids[0][_PRICE]} >= ask {self._asks[0][_PRICE]}"
                )


def price_impact(trade: Trade, previous_last_price: int) -> PriceImpact:
    """Classify a trade against the previous last transacted price."""
    if trade.price > previous_last_price:
        return PriceImpact.RAISED
    if trade.price < previous_last_price:
        return PriceImpact.LOWERED
    return PriceImpact.UNCHANGED


# -- trade-history line format ---------------------------------------
#
# One trade per line: `timestamp,coin,price,quantity,taker_side` with
# taker_side B or S. This is both the simulator's trade-log output and
# the replay backend's input.


def format_trade_line(trade: Trade) -> str:
    return (
        f"{trade.timestamp},{trade.coin},{trade.price},"
        f"{trade.quantity},{trade.taker_side.value}"
    )


def write_trade_log(trades: Iterable[Trade], out: TextIO) -> None:
    for t in trades:
        out.write(format_trade_line(t))
        out.write("\n")


@dataclass(slots=True, frozen=True)
class RecordedTrade:
    """A trade parsed from the line format (no owner attribution)."""

    timestamp: int
    coin: str
    price: int
    quantity: int
    taker_side: Side

    @property
    def value(self) -> int:
        return self.price * self.quantity


def parse_trade_line(line: str, lineno: int = 0) -> RecordedTrade:
    parts = line.rstrip("\n").split(",")
    if len(parts) != 5:
        raise ValueError(f"line {lineno}: expected 5 fields, got {len(parts)}")
    ts, coin, price, qty, side = parts
    if side not in ("B", "S"):
        raise ValueError(f"line {lineno}: bad taker side {side!r}")
    return RecordedTrade(int(ts), coin, int(price), int(qty), Side(side))


def read_trade_log(source: TextIO) -> list[RecordedTrade]:
    trades = []
    for i, line in enumerate(source, start=1):
        if line.strip():
            trades.append(parse_trade_line(line, i))
    return trades
