"""Person x event logs から人間関係の強さ (tie strength) を推定するパッケージ。"""

__version__ = "0.1.0"
