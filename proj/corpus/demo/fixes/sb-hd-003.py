import requests
import hashlib
import time

BASE = 'https://api.switch-bot.com/v1.1'


def get_device_list(token, secret):
    t = str(int(time.time() * 1000))
    sign = hashlib.sha256((token + t).encode()).hexdigest()
    headers = {'Authorization': token, 'sign': sign, 't': t, 'nonce': 'n-1'}
    response = requests.get(f'{BASE}/devices', headers=headers)
    return response.json()
