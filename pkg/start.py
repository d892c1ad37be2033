"""
@FileName: start.py
@DateTime: 2025/06/16 23:26:59
@Docs: 主程序
"""

import sys

from app.main import main

if __name__ == "__main__":
    # 例: python start.py --config configs/default.env pipeline
    sys.exit(main())
